"""
Minimal graded projective resolutions, Ext tables and linear complexes.

Complexes use cohomological positions: a projective resolution occupies
positions 0, -1, -2, ... A summand X<j> has centroid -j, and a complex is
linear when every summand at position i has shift i.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from sympy.polys.matrices.sdm import SDM

from app.engine import linalg
from app.engine import modules as mod
from app.engine.algebra import Element, GradedAlgebra, opposite
from app.engine.linalg import Vector
from app.engine.modules import Block, FreeModule, GradedModule, ModuleMap
from app.engine.strat import HOLDS, UNDETERMINED, VIOLATED, combine_verdicts
from app.exceptions import RefusedError, UsageError

logger = logging.getLogger(__name__)

KIND_LETTERS = {"projective": "P", "injective": "I", "tilting": "T", "simple": "L"}


# ============ COMPLEXES ============

@dataclass(frozen=True)
class Summand:
    """A named indecomposable X(vertex)<shift>."""

    kind: str
    vertex: str
    shift: int

    @property
    def centroid(self) -> int:
        return -self.shift

    def shifted(self, i: int) -> "Summand":
        return Summand(self.kind, self.vertex, self.shift + i)

    def __str__(self) -> str:
        return mod.shift_label(f"{self.kind}({self.vertex})", self.shift)


@dataclass
class Complex:
    """
    A bounded complex of named indecomposables.

    ``modules`` and ``differentials`` hold the realized terms when they were
    computed; ``differentials[i]`` maps position i to position i + 1.
    """

    terms: Dict[int, List[Summand]]
    modules: Dict[int, GradedModule] = field(default_factory=dict)
    differentials: Dict[int, ModuleMap] = field(default_factory=dict)
    decomposed: bool = True
    label: str = ""

    def positions(self) -> List[int]:
        return sorted(i for i, s in self.terms.items() if s)

    def centroids(self, i: int) -> List[int]:
        return [s.centroid for s in self.terms.get(i, [])]

    def shifted(self, j: int) -> "Complex":
        """Apply <j> to every term."""
        return Complex({i: [s.shifted(j) for s in ss] for i, ss in self.terms.items()},
                       decomposed=self.decomposed, label=mod.shift_label(self.label, j))

    def squares_to_zero(self) -> bool:
        for i, d in self.differentials.items():
            after = self.differentials.get(i + 1)
            if after is not None and not after.compose(d).is_zero():
                return False
        return True

    def term_list(self) -> List[Tuple[int, List[str]]]:
        return [(i, [str(s) for s in self.terms[i]]) for i in self.positions()]


def is_linear(C: Complex, kind: str) -> bool:
    """
    Every summand at position i is X<i>.

    Raises:
        RefusedError: the terms are not decomposed into named indecomposables
        UsageError: unknown kind
    """
    if kind not in KIND_LETTERS:
        raise UsageError(f"unknown complex kind '{kind}'")
    if not C.decomposed:
        raise RefusedError("terms are not decomposed", provenance=C.label or "complex")
    letter = KIND_LETTERS[kind]
    for i in C.positions():
        for s in C.terms[i]:
            if s.kind != letter:
                raise RefusedError(f"summand {s} is not of kind {kind}", provenance=C.label or "complex")
            if s.shift != i:
                return False
    return True


def dominates(X: Complex, Y: Complex) -> bool:
    """Every centroid of X^i lies strictly below every centroid of Y^i."""
    for i in set(X.positions()) & set(Y.positions()):
        if max(X.centroids(i)) >= min(Y.centroids(i)):
            return False
    return True


# ============ RESOLUTIONS ============

@dataclass
class ProjectiveResolution:
    """
    A minimal projective resolution computed in the degree window [lo, hi].

    ``images[k][x]`` is the image of generator x of F_k: an element of
    F_{k-1} (or of the resolved module when k = 0). Everything is exact in
    degrees up to ``hi``; generators above ``hi`` are not known.
    """

    module: GradedModule
    lo: int
    hi: int
    terms: List[FreeModule]
    images: List[List[Vector]]
    differentials: List[ModuleMap]
    complete: bool

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def generators(self, k: int) -> Tuple[Tuple[str, int], ...]:
        return self.terms[k].generators if k < len(self.terms) else ()

    def coefficients(self, k: int) -> List[Dict[int, Element]]:
        """For every generator of F_k (k >= 1), its image as algebra elements per generator of F_{k-1}."""
        previous = self.terms[k - 1]
        return [previous.decompose((deg, v), self.images[k][x])
                for x, (v, deg) in enumerate(self.terms[k].generators)]

    def known_to(self, k: int) -> bool:
        """F_k has been computed (or the resolution stopped before k)."""
        return k < len(self.terms) or self.complete

    def is_minimal(self) -> bool:
        """No differential entry has a degree-zero component."""
        for k in range(1, len(self.terms)):
            for row in self.coefficients(k):
                for element in row.values():
                    if any(not path.arrows for path in element):
                        return False
        return True

    def as_complex(self) -> Complex:
        terms = {-k: [Summand("P", v, -g) for v, g in F.generators] for k, F in enumerate(self.terms)}
        modules = {-k: F.module for k, F in enumerate(self.terms)}
        differentials = {-k: d for k, d in enumerate(self.differentials, start=1)}
        return Complex(terms, modules, differentials, True, f"resolution of {self.module.label}")


def resolution_window(M: GradedModule) -> Tuple[int, int]:
    """[lo, hi] with hi at most lo + N and never beyond a cut end of M."""
    lo = M.lo
    hi = lo + M.algebra.N
    if not M.hi_exact:
        hi = min(hi, M.hi)
    return lo, hi


def minimal_projective_resolution(M: GradedModule, depth: int) -> ProjectiveResolution:
    """
    Resolve M by projective covers of successive kernels, up to position depth.

    Args:
        M: module with an exact lower end
        depth: homological bound

    Returns:
        ProjectiveResolution, complete when a kernel vanished in the window

    Raises:
        UsageError: M is cut below
    """
    if not M.lo_exact:
        raise UsageError(f"{M.label or 'module'} has no exact lower end")
    A = M.algebra
    if M.is_zero():
        return ProjectiveResolution(M, M.lo, M.hi, [], [], [], True)
    lo, hi = resolution_window(M)
    current = mod.restrict(mod.pad(M, lo, hi), lo, hi)
    to_previous: Optional[ModuleMap] = None
    terms: List[FreeModule] = []
    images: List[List[Vector]] = []
    differentials: List[ModuleMap] = []
    complete = False
    for k in range(depth + 1):
        gens = mod.top_generators(current)
        if not gens:
            complete = True
            break
        F = mod.free_module(A, [(v, g) for (g, v), _ in gens], lo, hi, label=f"F{k}")
        cover = F.map_to(current, [vec for _, vec in gens])
        if to_previous is None:
            images.append([vec for _, vec in gens])
        else:
            images.append([to_previous.apply(b, vec) for b, vec in gens])
            differentials.append(to_previous.compose(cover))
        terms.append(F)
        current, to_previous = mod.as_module(mod.kernel(cover), label=f"Omega{k + 1}")
    else:
        complete = mod.top_generators(current) == []
    logger.debug("resolved %s to length %d in [%d, %d]", M.label, len(terms) - 1, lo, hi)
    return ProjectiveResolution(M, lo, hi, terms, images, differentials, complete)


def euler_characteristic(res: ProjectiveResolution) -> Dict[Block, int]:
    """Alternating sum of the graded dimensions of the terms inside the window."""
    total: Dict[Block, int] = {}
    for k, F in enumerate(res.terms):
        sign = -1 if k % 2 else 1
        for b, n in F.module.dims.items():
            total[b] = total.get(b, 0) + sign * n
    return {b: n for b, n in total.items() if n}


def complex_euler_characteristic(C: Complex) -> Tuple[Dict[Block, int], Optional[int]]:
    """
    Alternating sum of the realized terms of C, sign (-1)^position.

    Returns:
        (dims, horizon): dims are exact in degrees up to horizon, which is
        None when every term is finite
    """
    total: Dict[Block, int] = {}
    horizon: Optional[int] = None
    for i, M in C.modules.items():
        sign = -1 if i % 2 else 1
        for b, n in M.dims.items():
            total[b] = total.get(b, 0) + sign * n
        if not M.hi_exact:
            horizon = M.hi if horizon is None else min(horizon, M.hi)
    if horizon is not None:
        total = {b: n for b, n in total.items() if b[0] <= horizon}
    return {b: n for b, n in total.items() if n}, horizon


def injective_coresolution(M: GradedModule, depth: int) -> Complex:
    """
    Minimal injective coresolution, through the opposite algebra and duality.

    Raises:
        UsageError: M is cut above
    """
    if not M.hi_exact:
        raise UsageError(f"{M.label or 'module'} has no exact upper end")
    A = M.algebra
    res = minimal_projective_resolution(mod.graded_dual(M, target_algebra=opposite(A)), depth)
    terms = {k: [Summand("I", v, g) for v, g in F.generators] for k, F in enumerate(res.terms)}
    modules = {k: mod.graded_dual(F.module, target_algebra=A) for k, F in enumerate(res.terms)}
    differentials = {}
    for k, d in enumerate(res.differentials, start=1):
        blocks = {(-j, v): mat.transpose() for (j, v), mat in d.blocks.items()}
        differentials[k - 1] = ModuleMap(modules[k - 1], modules[k], blocks)
    return Complex(terms, modules, differentials, True, f"coresolution of {M.label}")


# ============ EXT ============

@dataclass
class ExtTable:
    """dim ext^i(M, N<k>) with a reliability flag per cell."""

    source: str
    target: str
    dims: Dict[Tuple[int, int], int]
    exact: Dict[Tuple[int, int], bool]

    def dim(self, i: int, k: int) -> int:
        return self.dims.get((i, k), 0)

    def reliable(self, i: int, k: int) -> bool:
        return self.exact.get((i, k), False)

    def nonzero(self) -> List[Tuple[int, int, int]]:
        return sorted((i, k, n) for (i, k), n in self.dims.items() if n)


def _cochain_basis(res: ProjectiveResolution, i: int, N: GradedModule) -> Tuple[List[int], int, bool]:
    """Offsets of the generator blocks of Hom(F_i, N), its dimension, and whether all blocks are known."""
    offsets = []
    total = 0
    known = True
    for v, g in res.generators(i):
        n = N.known_dim(g, v)
        if n is None:
            known = False
            n = 0
        offsets.append(total)
        total += n
    return offsets, total, known


def _coboundary(res: ProjectiveResolution, i: int, N: GradedModule) -> Tuple[SDM, bool]:
    """The map Hom(F_i, N) -> Hom(F_{i+1}, N), precomposition with the differential."""
    K = N.field
    src_off, src_dim, known_src = _cochain_basis(res, i, N)
    tgt_off, tgt_dim, known_tgt = _cochain_basis(res, i + 1, N)
    exact = known_src and known_tgt
    rows: Dict[int, Dict[int, object]] = {}
    if i + 1 < len(res.terms) and src_dim and tgt_dim:
        gens_i = res.generators(i)
        for x, row in enumerate(res.coefficients(i + 1)):
            for y, element in row.items():
                v, g = gens_i[y]
                n = N.dim(g, v)
                for c in range(n):
                    image = N.act_element(element, g, {c: K.one})
                    if image is None:
                        exact = False
                        continue
                    for r, value in image.items():
                        rows.setdefault(tgt_off[x] + r, {})[src_off[y] + c] = value
    return linalg.matrix(rows, (tgt_dim, src_dim), K), exact


def ext_from_resolution(res: ProjectiveResolution, N: GradedModule, depth: int,
                        shifts: Iterable[int]) -> ExtTable:
    """ext^i(M, N<k>) as cohomology of Hom(F, N<k>)."""
    dims: Dict[Tuple[int, int], int] = {}
    exact: Dict[Tuple[int, int], bool] = {}
    for k in shifts:
        Nk = mod.shift(N, k)
        # generators above the window could meet N<k> there
        beyond = not (Nk.hi_exact and Nk.hi <= res.hi) and not res.complete
        ranks: Dict[int, int] = {}
        flags: Dict[int, bool] = {}
        for i in range(depth + 1):
            delta, ok = _coboundary(res, i, Nk)
            ranks[i] = linalg.rank(delta)
            flags[i] = ok
        for i in range(depth + 1):
            _, size, known = _cochain_basis(res, i, Nk)
            n = size - ranks[i] - ranks.get(i - 1, 0)
            if n:
                dims[(i, k)] = n
            exact[(i, k)] = (known and flags[i] and flags.get(i - 1, True)
                             and res.known_to(i + 1) and not beyond)
    return ExtTable(res.module.label, N.label, dims, exact)


def ext(M: GradedModule, N: GradedModule, depth: int, shifts: Iterable[int]) -> ExtTable:
    """
    Graded ext^i(M, N<k>) for 0 <= i <= depth and k in shifts.

    Args:
        M: module with an exact lower end
        N: target module
        depth: largest i
        shifts: the k to tabulate
    """
    res = minimal_projective_resolution(M, depth + 1)
    return ext_from_resolution(res, N, depth, list(shifts))


def simple_ext_dims(res: ProjectiveResolution, depth: int) -> Dict[Tuple[int, str, int], int]:
    """ext^i(M, L(mu)<k>) read off a minimal resolution: multiplicity of P(mu)<k> in F_i."""
    table: Dict[Tuple[int, str, int], int] = {}
    for i in range(min(depth, res.length) + 1):
        for v, g in res.generators(i):
            key = (i, v, -g)
            table[key] = table.get(key, 0) + 1
    return table


def ext_algebra_dims(A: GradedAlgebra, depth: int) -> Dict[Tuple[str, str, int, int], int]:
    """dim ext^i(L(lam), L(mu)<k>) for all vertices, nonzero entries only."""
    table = {}
    for lam in A.vertices:
        res = minimal_projective_resolution(mod.simple(A, lam), depth)
        for (i, mu, k), n in simple_ext_dims(res, depth).items():
            table[(lam, mu, i, k)] = n
    return table


# ============ KOSZULITY ============

@dataclass
class LinearityReport:
    vertex: str
    verdict: str
    checked_positions: List[int]
    nonlinear: List[str]
    window_hi: int


def linearity_report(A: GradedAlgebra, lam: str, depth: int) -> Tuple[LinearityReport, ProjectiveResolution]:
    res = minimal_projective_resolution(mod.simple(A, lam), depth)
    nonlinear = [f"{Summand('P', v, -g)} at position {-k}"
                 for k in range(len(res.terms)) for v, g in res.generators(k) if g != k]
    checked = [k for k in range(depth + 1) if k <= res.hi]
    if nonlinear:
        verdict = VIOLATED
    elif len(checked) == depth + 1:
        verdict = HOLDS
    else:
        verdict = UNDETERMINED
    return LinearityReport(lam, verdict, [-k for k in checked], nonlinear, res.hi), res


def is_koszul(A: GradedAlgebra, depth: int) -> Tuple[str, Dict[str, LinearityReport]]:
    """
    Linearity of the minimal resolution of every simple module through position -depth.

    Positions whose generators would lie above the window are undetermined.
    """
    reports = {lam: linearity_report(A, lam, depth)[0] for lam in A.vertices}
    verdict = combine_verdicts(r.verdict for r in reports.values())
    logger.info("koszul at depth %d: %s", depth, verdict)
    return verdict, reports
