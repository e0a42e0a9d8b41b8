import logging
import sys
from pathlib import Path
from typing import Optional

import typer

from app.commands import CommandResult, get_handler, include_router
from app.commands import duality, inspection, tilting
from app.commands.render import status_of
from app.config import settings
from app.dependencies import resolve_job
from app.exceptions import AlgebraError, UsageError
from app.parser import load_job, parse_order
from app.schemas import JobSpec, Report

logger = logging.getLogger(__name__)

# Register command handlers
include_router(inspection.router)
include_router(tilting.router)
include_router(duality.router)

EXIT_CODES = {"computed": 0, "violated": 1, "undetermined": 2, "error": 3}

app = typer.Typer(
    name="stratalg",
    help=f"{settings.app_name}: exact computations with positively graded standardly stratified algebras.",
    add_completion=False,
)


def configure_logging() -> None:
    level = logging.DEBUG if settings.debug else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def apply_overrides(spec: JobSpec, command: str, truncate: Optional[int], depth: Optional[int],
                    field: Optional[str], order: Optional[str], out: Optional[Path]) -> JobSpec:
    """Command-line flags win over the input file."""
    presentation = spec.presentation
    if truncate is not None:
        presentation = presentation.model_copy(update={"truncation": truncate})
    if field is not None:
        presentation = presentation.model_copy(update={"field": field})
    update = {"presentation": presentation, "command": command, "output": str(out) if out else None}
    if depth is not None:
        update["depth"] = depth
    if order is not None:
        update["order"] = parse_order(order)
        update["order_line"] = None
    return spec.model_copy(update=update)


def run_job(spec: JobSpec) -> Report:
    """Execute one job and wrap the outcome, errors included, in a report."""
    base = {
        "schema_version": settings.report_schema_version,
        "command": spec.command,
        "truncation": spec.presentation.truncation,
        "depth": spec.depth,
        "field": spec.presentation.field,
    }
    try:
        handler = get_handler(spec.command)
        job = resolve_job(spec)
        logger.info("running %s at N = %d", spec.command, job.algebra.N)
        result: CommandResult = handler(job)
    except AlgebraError as e:
        status = {1: "violated", 2: "undetermined"}.get(e.exit_code, "error")
        logger.info("%s stopped: %s", spec.command, e.detail)
        return Report(**base, status=status, exit_code=e.exit_code, summary=[e.detail], detail=e.detail)
    status = status_of(result.verdict)
    return Report(**base, status=status, exit_code=EXIT_CODES[status], summary=result.summary, data=result.data)


def render(report: Report, report_format: str) -> str:
    if report_format == "summary":
        lines = [f"{report.command}: {report.status}"] + [f"  {line}" for line in report.summary]
        return "\n".join(lines) + "\n"
    return report.model_dump_json(indent=2) + "\n"


@app.command()
def main(
    input_file: Path = typer.Option(..., "--input", help="Input file in the line format"),
    command: str = typer.Option("classify", "--command", help="validate, stratify, standard-modules, tilting, "
                                                             "classify, ringel, koszul, commute or simples-as-tilting"),
    truncate: Optional[int] = typer.Option(None, "--truncate", min=1, help="Truncation degree N"),
    depth: Optional[int] = typer.Option(None, "--depth", min=1, help="Homological depth L"),
    field: Optional[str] = typer.Option(None, "--field", help="Q, GF(p) or GF:p"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the report here instead of stdout"),
    report_format: str = typer.Option("report", "--format", help="report (JSON) or summary (text)"),
    order: Optional[str] = typer.Option(None, "--order", help="Override the order line, e.g. '1 < 2'"),
):
    """
    Run one command on one algebra.

    Exit status: 0 computed, 1 property violated, 2 undetermined at N,
    3 input error.
    """
    configure_logging()
    try:
        if report_format not in ("report", "summary"):
            raise UsageError(f"unknown format '{report_format}'")
        spec = apply_overrides(load_job(input_file), command, truncate, depth, field, order, out)
        report = run_job(spec)
    except AlgebraError as e:
        report = Report(schema_version=settings.report_schema_version, command=command, status="error",
                        exit_code=e.exit_code, summary=[e.detail], detail=e.detail)
    text = render(report, report_format if report_format == "summary" else "report")
    if out is not None:
        out.write_text(text, encoding="utf-8")
    else:
        typer.echo(text, nl=False)
    raise typer.Exit(code=report.exit_code)
