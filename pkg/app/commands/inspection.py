import logging

from app.commands import CommandResult, CommandRouter
from app.commands.render import filtration_out, module_out, multiplicity_rows, phrase
from app.dependencies import Job
from app.engine import modules as mod
from app.engine.algebra import to_presentation_text, validate_positive
from app.engine.strat import (
    HOLDS,
    KINDS,
    VIOLATED,
    delta_filtration,
    injective_nabla_multiplicities,
    is_standardly_stratified,
    strat_module,
)

logger = logging.getLogger(__name__)

router = CommandRouter(tags=["inspection"])


@router.command("validate")
def validate(job: Job) -> CommandResult:
    """
    Build the algebra and check that its grading is positive.

    Returns:
        The normalized presentation and the graded Cartan matrices
    """
    A = job.algebra
    check = validate_positive(A)
    verdict = HOLDS if check["positive"] else VIOLATED
    summary = [
        f"{len(A.vertices)} vertices, {len(A.arrow_list)} arrows, "
        f"{len(job.presentation.relations)} relations",
        f"dimension by degree: {[A.dim(d) for d in range(A.N + 1)]}",
        "grading is positive" if check["positive"] else "grading is not positive",
    ]
    data = {
        "presentation": to_presentation_text(job.presentation, job.order, job.depth),
        "vertices": list(A.vertices),
        "order": job.order.to_text(),
        "dimensions": [A.dim(d) for d in range(A.N + 1)],
        "cartan": A.cartan_table(),
        "violations": check["violations"],
    }
    return CommandResult(verdict, summary, data)


@router.command("stratify")
def stratify(job: Job) -> CommandResult:
    """Peel a standard filtration of every K(lam)."""
    A = job.algebra
    result = is_standardly_stratified(A, job.order)
    summary = [f"standardly stratified: {phrase(result.verdict, A.N)}"]
    for lam, verdict in result.verdicts.items():
        report = result.reports[lam]
        layers = ", ".join(str(x) for x in report.layers + report.boundary_layers) or "none"
        summary.append(f"K({lam}): {verdict}; layers {layers}")
        summary.extend(f"  {line}" for line in report.diagnosis)
    data = {
        "verdicts": dict(result.verdicts),
        "filtrations": {lam: filtration_out(r).model_dump() for lam, r in result.reports.items()},
    }
    logger.info("stratify: %s", result.verdict)
    return CommandResult(result.verdict, summary, data)


@router.command("standard-modules")
def standard_modules(job: Job) -> CommandResult:
    """
    The four (proper) (co)standard modules at every vertex, the standard
    filtration of every projective and the proper costandard multiplicities
    of every injective.
    """
    A = job.algebra
    modules = {}
    filtrations = {}
    verdicts = []
    summary = []
    for lam in A.vertices:
        modules[lam] = {kind: module_out(strat_module(A, job.order, kind, lam)).model_dump() for kind in KINDS}
        report = delta_filtration(mod.projective(A, lam), job.order)
        filtrations[lam] = filtration_out(report).model_dump()
        if report.status == "failed":
            verdicts.append(VIOLATED)
        D = strat_module(A, job.order, "delta", lam)
        exact = "finite" if D.hi_exact else f"cut at degree {D.hi}"
        summary.append(f"Δ({lam}): graded dims {D.graded_dims()} ({exact})")
        summary.append(f"P({lam}): {report.status}, layers {[str(x) for x in report.layers]}")
        summary.extend(f"  {line}" for line in report.diagnosis)
    multiplicities = {}
    for lam in A.vertices:
        P = mod.projective(A, lam)
        table = {}
        for mu in A.vertices:
            target = strat_module(A, job.order, "proper_nabla", mu)
            for j in range(-A.N, 1):
                n = mod.hom_dim(P, mod.shift(target, j))
                if n:
                    table[(mu, j)] = n
        multiplicities[lam] = multiplicity_rows(table)
    injectives = {lam: multiplicity_rows(injective_nabla_multiplicities(A, job.order, lam)) for lam in A.vertices}
    data = {
        "modules": modules,
        "projective_filtrations": filtrations,
        "reciprocity": multiplicities,
        "injective_multiplicities": injectives,
    }
    return CommandResult(VIOLATED if verdicts else HOLDS, summary, data)
