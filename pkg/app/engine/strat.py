"""
Standard modules, the standardly stratified test and standard filtrations.

Layers are peeled class by class, largest class first: the trace of a class
in what is left must be a direct sum of shifted standard modules, one per
top generator, and the quotient by it must no longer see that class.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from app.engine import modules as mod
from app.engine.algebra import GradedAlgebra, opposite
from app.engine.modules import GradedModule
from app.engine.order import StratOrder
from app.exceptions import RefusedError, UsageError

logger = logging.getLogger(__name__)

HOLDS = "holds"
VIOLATED = "violated"
UNDETERMINED = "undetermined"

KINDS = ("delta", "proper_delta", "nabla", "proper_nabla")
SYMBOLS = {"delta": "Δ", "proper_delta": "Δ̄", "nabla": "∇", "proper_nabla": "∇̄"}


def combine_verdicts(verdicts) -> str:
    """violated beats undetermined beats holds."""
    verdicts = list(verdicts)
    if VIOLATED in verdicts:
        return VIOLATED
    if UNDETERMINED in verdicts:
        return UNDETERMINED
    return HOLDS


# ============ STANDARD MODULES ============

@lru_cache(maxsize=256)
def strat_module(A: GradedAlgebra, order: StratOrder, kind: str, lam: str) -> GradedModule:
    """
    Build one of the four (proper) (co)standard modules at a vertex.

    Args:
        A: the algebra
        order: stratification order on its vertices
        kind: delta, proper_delta, nabla or proper_nabla
        lam: the vertex

    Returns:
        The module; costandard ones are graded duals of the standard modules
        of the opposite algebra, with the socle in degree 0.

    Raises:
        UsageError: unknown kind or vertex
    """
    if kind not in KINDS:
        raise UsageError(f"unknown module kind '{kind}'")
    if lam not in A.vertices:
        raise UsageError(f"unknown vertex '{lam}'")
    label = f"{SYMBOLS[kind]}({lam})"
    if kind in ("nabla", "proper_nabla"):
        left_kind = "delta" if kind == "nabla" else "proper_delta"
        left = strat_module(opposite(A), order, left_kind, lam)
        return mod.graded_dual(left, target_algebra=A).relabel(label)
    P = mod.projective(A, lam)
    if kind == "delta":
        S = mod.trace_of_vertices(P, order.above(lam))
    else:
        S = mod.trace_of_vertices(P, order.at_or_above(lam), above=0)
    Q, _ = mod.quotient_module(P, S, label=label)
    return mod.seal(Q, 0)


def standard_kernel(A: GradedAlgebra, order: StratOrder, lam: str) -> GradedModule:
    """K(lam), the kernel of P(lam) -> Δ(lam)."""
    P = mod.projective(A, lam)
    K, _ = mod.as_module(mod.trace_of_vertices(P, order.above(lam)), label=f"K({lam})")
    return K


# ============ FILTRATIONS ============

@dataclass(frozen=True)
class Layer:
    kind: str
    vertex: str
    shift: int
    reliable: bool = True

    @property
    def degree(self) -> int:
        """Degree of the generator of the layer."""
        return -self.shift

    def __str__(self) -> str:
        return mod.shift_label(f"{SYMBOLS[self.kind]}({self.vertex})", self.shift)


@dataclass
class FiltrationReport:
    """
    Result of peeling a standard filtration.

    ``layers`` are the layers generated strictly inside the window, submodule
    first; ``boundary_layers`` are those generated in the last band of a cut
    window.
    """

    label: str
    status: str
    layers: List[Layer] = field(default_factory=list)
    boundary_layers: List[Layer] = field(default_factory=list)
    diagnosis: List[str] = field(default_factory=list)

    @property
    def succeeded(self) -> bool:
        return self.status in ("complete", "truncated")

    def multiplicities(self, include_boundary: bool = False) -> Dict[Tuple[str, int], int]:
        table: Dict[Tuple[str, int], int] = {}
        layers = self.layers + (self.boundary_layers if include_boundary else [])
        for layer in layers:
            key = (layer.vertex, layer.shift)
            table[key] = table.get(key, 0) + 1
        return table


def _expected_dims(A: GradedAlgebra, order: StratOrder, gens) -> Tuple[Dict[Tuple[int, str], int], Optional[int]]:
    """Graded dimensions of the direct sum of Δ(mu)<-g>, and the degree up to which they are known."""
    expected: Dict[Tuple[int, str], int] = {}
    horizon: Optional[int] = None
    for (g, mu), _ in gens:
        D = strat_module(A, order, "delta", mu)
        for (j, v), n in D.dims.items():
            b = (j + g, v)
            expected[b] = expected.get(b, 0) + n
        if not D.hi_exact:
            top = D.hi + g
            horizon = top if horizon is None else min(horizon, top)
    return expected, horizon


def peel(M: GradedModule, order: StratOrder) -> FiltrationReport:
    """
    Extract a standard filtration of M by peeling largest classes first.

    Returns:
        FiltrationReport with status complete, truncated or failed
    """
    A = M.algebra
    width = max(1, A.max_degree)
    boundary_from = None if M.hi_exact else M.hi - width + 1
    layers: List[Layer] = []
    boundary: List[Layer] = []
    current = M
    for cls in reversed(order.classes):
        trace = mod.trace_of_vertices(current, cls)
        if not trace.total_dim:
            continue
        T, _ = mod.as_module(trace)
        gens = mod.top_generators(T)
        expected, horizon = _expected_dims(A, order, gens)
        # degrees the standard modules reach past an exact end must vanish too
        degrees = sorted(set(T.degrees()) | {j for j, _ in expected})
        for j in degrees:
            if horizon is not None and j > horizon:
                break
            for v in A.vertices:
                want = expected.get((j, v), 0)
                have = T.known_dim(j, v)
                if have is not None and want != have:
                    detail = (f"trace of {','.join(cls)} in degree {j} at vertex {v} has dimension "
                              f"{T.dim(j, v)}, a sum of standard modules needs {want}")
                    logger.debug("peeling %s failed: %s", M.label, detail)
                    return FiltrationReport(M.label, "failed", layers, boundary, [detail])
        for (g, mu), _ in gens:
            in_band = boundary_from is not None and g >= boundary_from
            layer = Layer("delta", mu, -g, reliable=not in_band)
            (boundary if in_band else layers).append(layer)
        current, _ = mod.quotient_module(current, trace)
        left = [b for b in current.blocks() if b[1] in cls]
        if left:
            j, v = left[0]
            detail = f"after removing class {','.join(cls)} vertex {v} survives in degree {j}"
            return FiltrationReport(M.label, "failed", layers, boundary, [detail])
    status = "truncated" if boundary else "complete"
    return FiltrationReport(M.label, status, layers, boundary)


def layers_recur(layers: List[Layer], top: int, width: int) -> bool:
    """The layer pattern of the band ending at top repeats the band below it, nonzero."""

    def band(start: int) -> Dict[Tuple[str, int], int]:
        counts: Dict[Tuple[str, int], int] = {}
        for layer in layers:
            if start <= layer.degree < start + width:
                key = (layer.vertex, layer.degree - start)
                counts[key] = counts.get(key, 0) + 1
        return counts

    last = band(top - width + 1)
    return bool(last) and last == band(top - 2 * width + 1)


@dataclass
class StratificationResult:
    verdict: str
    verdicts: Dict[str, str]
    reports: Dict[str, FiltrationReport]


def is_standardly_stratified(A: GradedAlgebra, order: StratOrder) -> StratificationResult:
    """
    Peel a standard filtration of every K(lam).

    A failed peel inside the window is a violation; a filtration whose layers
    keep recurring up to the window boundary is a violation as well; other
    filtrations that reach the boundary are undetermined.
    """
    width = max(1, A.max_degree)
    verdicts: Dict[str, str] = {}
    reports: Dict[str, FiltrationReport] = {}
    for lam in A.vertices:
        K = standard_kernel(A, order, lam)
        report = peel(K, order)
        reports[lam] = report
        if report.status == "failed":
            verdicts[lam] = VIOLATED
        elif report.status == "complete":
            verdicts[lam] = HOLDS
        elif layers_recur(report.layers + report.boundary_layers, K.hi, width):
            verdicts[lam] = VIOLATED
            report.diagnosis.append(f"standard layers recur in every band up to degree {K.hi}")
        else:
            verdicts[lam] = UNDETERMINED
        logger.info("K(%s): %s with %d layers", lam, verdicts[lam], len(report.layers))
    return StratificationResult(combine_verdicts(verdicts.values()), verdicts, reports)


def delta_filtration(M: GradedModule, order: StratOrder) -> FiltrationReport:
    """
    Standard filtration of M, or the nonvanishing ext^1(M, ∇̄(lam)<j>) on failure.
    """
    report = peel(M, order)
    if report.succeeded:
        return report
    from app.engine.homology import ext

    A = M.algebra
    for lam in A.vertices:
        target = strat_module(A, order, "proper_nabla", lam)
        shifts = range(-M.hi - 1, -M.lo + (target.hi - target.lo) + 2)
        table = ext(M, target, 1, shifts)
        for j in shifts:
            if table.dim(1, j):
                mark = "" if table.reliable(1, j) else " (near the window boundary)"
                report.diagnosis.append(f"ext^1({M.label}, {mod.shift_label(target.label, j)}) "
                                        f"has dimension {table.dim(1, j)}{mark}")
    return report


def certify_proper_nabla(M: GradedModule, order: StratOrder) -> List[str]:
    """Nonvanishing ext^1(Δ(mu)<j>, M) cells; empty when M passes the Ext test."""
    from app.engine.homology import ext

    A = M.algebra
    failures = []
    for mu in A.vertices:
        D = strat_module(A, order, "delta", mu)
        shifts = range(D.lo - M.hi - 1, D.lo - M.lo + A.N + 1)
        table = ext(D, M, 1, shifts)
        for k in shifts:
            if table.dim(1, k) and table.reliable(1, k):
                # ext^1(Δ, M<k>) = ext^1(Δ<-k>, M)
                failures.append(f"ext^1({mod.shift_label(D.label, -k)}, {M.label}) = {table.dim(1, k)}")
    return failures


def filtration_multiplicity(M: GradedModule, order: StratOrder, kind: str, lam: str, j: int) -> int:
    """
    Graded multiplicity of a layer, read off a hom space.

    Args:
        kind: "delta" for [M : Δ(lam)<j>], "proper_nabla" for [M : ∇̄(lam)<j>]

    Raises:
        RefusedError: M has no certified filtration of that kind
        UsageError: unknown kind
    """
    A = M.algebra
    if kind == "delta":
        report = peel(M, order)
        if not report.succeeded:
            raise RefusedError("; ".join(report.diagnosis) or "no standard filtration",
                               provenance=M.label or "module")
        return mod.hom_dim(M, mod.shift(strat_module(A, order, "proper_nabla", lam), j))
    if kind == "proper_nabla":
        failures = certify_proper_nabla(M, order)
        if failures:
            raise RefusedError("; ".join(failures), provenance=M.label or "module")
        return mod.hom_dim(mod.shift(strat_module(A, order, "delta", lam), j), M)
    raise UsageError(f"unknown filtration kind '{kind}'")


def injective_nabla_multiplicities(A: GradedAlgebra, order: StratOrder, lam: str) -> Dict[Tuple[str, int], int]:
    """
    [I(lam) : ∇̄(mu)<j>] = dim hom(Δ(mu)<j>, I(lam)) for 0 <= j <= N.

    With (M<j>)_i = M_{i+j}, Δ(mu)<j> is generated in degree -j, so these
    shifts cover the part of I(lam) in degrees -N..0. Only nonzero entries
    are returned.
    """
    I = mod.injective(A, lam)
    table: Dict[Tuple[str, int], int] = {}
    for mu in A.vertices:
        D = strat_module(A, order, "delta", mu)
        for j in range(0, A.N + 1):
            n = mod.hom_dim(mod.shift(D, j), I)
            if n:
                table[(mu, j)] = n
    return table
