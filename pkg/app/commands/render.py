"""Conversions from engine objects to report schemas."""
from typing import Dict, List, Optional, Tuple

from app.engine.algebra import to_presentation_text
from app.engine.duality import DualAlgebra
from app.engine.homology import Complex, is_linear
from app.engine.modules import GradedModule
from app.engine.strat import HOLDS, VIOLATED, FiltrationReport, Layer
from app.schemas import (
    AlgebraOut,
    ComplexOut,
    ComplexTermOut,
    ExtTableOut,
    FiltrationReportOut,
    LayerReport,
    ModuleOut,
)

STATUS_OF_VERDICT = {HOLDS: "computed", VIOLATED: "violated"}


def status_of(verdict: str) -> str:
    return STATUS_OF_VERDICT.get(verdict, "undetermined")


def phrase(verdict: str, N: int) -> str:
    if verdict == HOLDS:
        return f"holds at N = {N}"
    if verdict == VIOLATED:
        return f"violated within N = {N}"
    return f"undetermined at N = {N}"


def layer_out(layer: Layer) -> LayerReport:
    return LayerReport(kind=layer.kind, vertex=layer.vertex, shift=layer.shift,
                       reliable=layer.reliable, label=str(layer))


def filtration_out(report: FiltrationReport) -> FiltrationReportOut:
    return FiltrationReportOut(
        label=report.label,
        status=report.status,
        layers=[layer_out(x) for x in report.layers],
        boundary_layers=[layer_out(x) for x in report.boundary_layers],
        diagnosis=list(report.diagnosis),
    )


def module_out(M: GradedModule) -> ModuleOut:
    return ModuleOut(label=M.label, lo=M.lo, hi=M.hi, lo_exact=M.lo_exact, hi_exact=M.hi_exact,
                     dims=M.dimension_vector())


def complex_out(C: Complex, kind: Optional[str] = "tilting", complete: bool = True) -> ComplexOut:
    terms = [ComplexTermOut(position=i, summands=names) for i, names in C.term_list()]
    linear = is_linear(C, kind) if kind else None
    return ComplexOut(label=C.label, terms=terms, linear=linear, complete=complete)


def algebra_out(dual: DualAlgebra) -> AlgebraOut:
    B = dual.algebra()
    return AlgebraOut(
        name=dual.name,
        presentation=to_presentation_text(dual.presentation, dual.order),
        order=dual.order.to_text(),
        reliable_degree=dual.reliable_degree,
        cartan=B.cartan_table(),
        mismatches=list(dual.mismatches),
    )


def multiplicity_rows(table: Dict) -> List[Dict]:
    """{(vertex, shift): n} as a list of rows sorted by vertex then shift."""
    return [{"vertex": v, "shift": j, "multiplicity": n} for (v, j), n in sorted(table.items())]


def ext_tables_out(table: Dict[Tuple[str, str, int, int], int]) -> List[ExtTableOut]:
    """Group {(lam, mu, i, k): n} into one table per pair of simples."""
    grouped: Dict[Tuple[str, str], List[Dict]] = {}
    for (lam, mu, i, k), n in sorted(table.items()):
        grouped.setdefault((lam, mu), []).append({"degree": i, "shift": k, "dim": n})
    return [ExtTableOut(source=f"L({lam})", target=f"L({mu})", cells=cells) for (lam, mu), cells in grouped.items()]
