"""
Tilting modules and complexes of tilting modules.

T(lam) grows from Δ(lam) by universal extensions. Each round takes the
lowest degree g where some ext^1(Δ(nu)<-g>, X) with nu in the current class
is nonzero, and kills all of it at once: one copy of P(nu)<-g> is glued to X
along the kernel of P(nu)<-g> -> Δ(nu)<-g> per basis cocycle. Classes are
processed from the top of the order down.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.engine import linalg
from app.engine import modules as mod
from app.engine.algebra import GradedAlgebra
from app.engine.homology import Complex, Summand, is_linear
from app.engine.modules import Block, FreeModule, GradedModule, HomSpace, ModuleMap
from app.engine.order import StratOrder
from app.engine.strat import (HOLDS, UNDETERMINED, VIOLATED, FiltrationReport, Layer, StratificationResult,
                              certify_proper_nabla, combine_verdicts, is_standardly_stratified, layers_recur,
                              peel, strat_module)
from app.exceptions import RefusedError, UsageError

logger = logging.getLogger(__name__)

LADDER = ("not-stratified", "stratified", "weakly-adapted", "adapted", "balanced")


def _width(A: GradedAlgebra) -> int:
    return max(1, A.max_degree)


# ============ EXTENSIONS ============

@dataclass(frozen=True, eq=False)
class StandardPresentation:
    """P(nu)<-g> with the kernel of its projection onto Δ(nu)<-g>."""

    vertex: str
    degree: int
    cover: FreeModule
    syzygy: GradedModule
    inclusion: ModuleMap


@lru_cache(maxsize=1024)
def standard_presentation(A: GradedAlgebra, order: StratOrder, nu: str, g: int) -> StandardPresentation:
    cover = mod.free_module(A, [(nu, g)], g, g + A.N, label=mod.shift_label(f"P({nu})", -g))
    syzygy, inclusion = mod.as_module(mod.trace_of_vertices(cover.module, order.above(nu)))
    return StandardPresentation(nu, g, cover, syzygy, inclusion)


def ext1_cocycles(X: GradedModule, order: StratOrder, nu: str, g: int) -> List[ModuleMap]:
    """
    Maps Ω -> X representing a basis of ext^1(Δ(nu)<-g>, X).

    A map out of Ω is a coboundary when it extends over P(nu)<-g>, i.e. when
    it is the restriction of the map sending the generator into e_nu X_g.
    """
    pres = standard_presentation(X.algebra, order, nu, g)
    if pres.syzygy.is_zero():
        return []
    H = mod.hom_space(pres.syzygy, X)
    if not H.dim:
        return []
    K = X.field
    layout, size = mod.map_layout(pres.syzygy, X)
    restrictions = []
    for c in range(X.dim(g, nu)):
        extended = pres.cover.map_to(X, [{c: K.one}])
        restrictions.append(mod.flatten_map(extended.compose(pres.inclusion), layout))
    span = linalg.span(restrictions, size, K)
    cocycles = []
    for f in H.basis:
        vec = mod.flatten_map(f, layout)
        if not span.contains(K, vec):
            cocycles.append(f)
            span = linalg.sum_subspaces(span, linalg.span([vec], size, K), K)
    return cocycles


@dataclass
class Extension:
    module: GradedModule
    inclusion: ModuleMap
    layers: List[Layer] = field(default_factory=list)


def universal_extension(X: GradedModule, order: StratOrder, targets: Sequence[Tuple[str, int]],
                        label: str = "") -> Extension:
    """
    Kill ext^1(Δ(nu)<-g>, X) for every target (nu, g) in one step.

    The middle term is (X + P_1 + ... + P_r) modulo the elements
    (-c_k(w), ..., w in copy k, ...), with one copy P_k of P(nu)<-g> for each
    basis cocycle c_k.

    Raises:
        UsageError: a target sits at or above the cut end of X
    """
    K = X.field
    pieces: List[Tuple[StandardPresentation, ModuleMap]] = []
    for nu, g in targets:
        if not X.hi_exact and g >= X.hi:
            raise UsageError(f"extension by Δ({nu}) in degree {g} lies beyond the window of {X.label}")
        pres = standard_presentation(X.algebra, order, nu, g)
        pieces.extend((pres, c) for c in ext1_cocycles(X, order, nu, g))
    if not pieces:
        return Extension(X, mod.identity_map(X))
    S, offsets = mod.direct_sum([X] + [pres.cover.module for pres, _ in pieces], label=label or X.label)
    relations = []
    for k, (pres, cocycle) in enumerate(pieces, start=1):
        for b, vec in mod.top_generators(pres.syzygy):
            if b not in offsets[k]:
                continue
            element = linalg.shift_vector(pres.inclusion.apply(b, vec), offsets[k][b])
            image = cocycle.apply(b, vec)
            if image:
                element = linalg.combine(K, [(K.one, element),
                                             (-K.one, linalg.shift_vector(image, offsets[0][b]))])
            relations.append((b, element))
    Y, projection = mod.quotient_module(S, mod.generate(S, relations), label=label or X.label)
    generated = [b[0] for b, _ in mod.top_generators(Y)]
    if generated:
        sealed = mod.seal(Y, max(generated))
        projection = ModuleMap(S, sealed, projection.blocks)
        Y = sealed
    blocks = {}
    for b in X.blocks():
        if b not in offsets[0] or not Y.dim(*b):
            continue
        cols = [projection.apply(b, {offsets[0][b] + c: K.one}) for c in range(X.dim(*b))]
        blocks[b] = linalg.from_columns(cols, Y.dim(*b), K)
    layers = [Layer("delta", pres.vertex, -pres.degree) for pres, _ in pieces]
    logger.debug("glued %d standard layers onto %s", len(layers), X.label)
    return Extension(Y, ModuleMap(X, Y, blocks), layers)


def lowest_extension(X: GradedModule, order: StratOrder, cls: Iterable[str]) -> Optional[Tuple[int, Dict[str, int]]]:
    """The lowest g with some ext^1(Δ(nu)<-g>, X) != 0, nu in cls, and the dimensions there."""
    cls = list(cls)
    for g in range(X.lo - X.algebra.N, X.hi):
        counts = {nu: len(ext1_cocycles(X, order, nu, g)) for nu in cls}
        counts = {nu: n for nu, n in counts.items() if n}
        if counts:
            return g, counts
    return None


@dataclass
class Completion:
    """
    Result of extending a module until no standard extension survives.

    ``pending`` holds the layers that would have been glued in the last band
    of a cut window when the construction stopped there.
    """

    module: GradedModule
    inclusion: ModuleMap
    layers: List[Layer]
    pending: List[Layer]
    verdict: str

    @property
    def constructible(self) -> bool:
        return self.verdict == HOLDS


def complete(X: GradedModule, order: StratOrder, classes: Sequence[Sequence[str]], label: str = "") -> Completion:
    """
    Apply universal extensions class by class, lowest degree first.

    A round that needs a degree in the last band of a cut window stops the
    construction: the verdict is violated when the glued layers repeat from
    band to band, undetermined otherwise.
    """
    A = X.algebra
    width = _width(A)
    rounds = 4 * (A.N + 1) * max(1, len(A.vertices))
    current, inclusion = X, mod.identity_map(X)
    layers: List[Layer] = []
    for cls in classes:
        for _ in range(rounds):
            found = lowest_extension(current, order, cls)
            if found is None:
                break
            g, counts = found
            if not current.hi_exact and g > current.hi - width:
                pending = [Layer("delta", nu, -g, reliable=False) for nu, n in counts.items() for _ in range(n)]
                recurring = layers_recur(layers + pending, g, width)
                logger.info("%s: extension in degree %d reaches the window boundary", label or X.label, g)
                return Completion(current, inclusion, layers, pending, VIOLATED if recurring else UNDETERMINED)
            step = universal_extension(current, order, [(nu, g) for nu in counts], label=label)
            layers.extend(step.layers)
            inclusion = step.inclusion.compose(inclusion)
            current = step.module
        else:
            return Completion(current, inclusion, layers, [], UNDETERMINED)
    return Completion(current, inclusion, layers, [], HOLDS)


# ============ TILTING MODULES ============

@dataclass
class TiltingModule:
    """
    T(lam) with the evidence gathered while building it.

    ``layers`` lists Δ(lam) first and then the glued layers in the order they
    were added; ``nabla_failures`` lists nonzero ext^1(Δ(mu)<j>, T) cells.
    """

    vertex: str
    module: GradedModule
    inclusion: ModuleMap
    layers: List[Layer]
    pending: List[Layer]
    verdict: str
    filtration: FiltrationReport
    nabla_failures: List[str]
    generators: List[Block]
    indecomposable: bool

    @property
    def constructible(self) -> bool:
        return self.verdict == HOLDS

    @property
    def label(self) -> str:
        return self.module.label

    @property
    def top_generator(self) -> int:
        return max(j for j, _ in self.generators)


def _scalar_plus_nilpotent(f: ModuleMap) -> bool:
    """f = c * id + nilpotent, blockwise."""
    M = f.source
    K = M.field
    scalar = None
    for b, n in M.dims.items():
        if not n:
            continue
        size = linalg.scalar(K, n)
        if not size:
            continue
        block = f.block(b)
        trace = K.zero
        for i in range(n):
            trace += block.get(i, {}).get(i, K.zero)
        c = K.quo(trace, size)
        if scalar is None:
            scalar = c
        elif c != scalar:
            return False
    if scalar is None:
        return True
    for b, n in M.dims.items():
        if not n:
            continue
        nil = f.block(b) - linalg.identity(n, K).mul(scalar)
        power = nil
        for _ in range(n - 1):
            power = linalg.matmul(power, nil)
        if not linalg.is_zero(power):
            return False
    return True


def is_local(M: GradedModule, sample: int = 6) -> bool:
    """
    Degree-zero endomorphisms look local: every basis element and every sum of
    two of the first few is a scalar plus a nilpotent.
    """
    H = mod.hom_space(M, M)
    K = M.field
    candidates = list(H.basis)
    candidates += [mod.combine_maps(M, M, [(K.one, f), (K.one, g)]) for f, g in combinations(H.basis[:sample], 2)]
    return all(_scalar_plus_nilpotent(f) for f in candidates)


@lru_cache(maxsize=64)
def tilting_module(A: GradedAlgebra, order: StratOrder, lam: str) -> TiltingModule:
    """
    Build T(lam) from Δ(lam) over the classes strictly below lam.

    The result is not constructible when an extension is still needed in
    the last band of the window; the partial module is returned with the
    pending layers.

    Raises:
        UsageError: unknown vertex
    """
    label = f"T({lam})"
    D = strat_module(A, order, "delta", lam)
    below = [cls for cls in reversed(order.classes) if order.precedes(cls[0], lam)]
    done = complete(D, order, below, label=label)
    T = done.module.relabel(label)
    inclusion = ModuleMap(D, T, done.inclusion.blocks)
    filtration = peel(T, order)
    failures = certify_proper_nabla(T, order) if done.constructible else []
    generators = [b for b, _ in mod.top_generators(T)]
    indecomposable = is_local(T)
    logger.info("%s: %s, %d layers, dims %s", label, done.verdict, 1 + len(done.layers), T.graded_dims())
    return TiltingModule(lam, T, inclusion, [Layer("delta", lam, 0)] + done.layers, done.pending,
                         done.verdict, filtration, failures, generators, indecomposable)


def require_tilting(A: GradedAlgebra, order: StratOrder, lam: str) -> TiltingModule:
    """
    Raises:
        RefusedError: T(lam) is not finitely constructible in the window
    """
    T = tilting_module(A, order, lam)
    if not T.constructible:
        raise RefusedError(f"not finitely constructible at N = {A.N}", provenance=T.label,
                           exit_code=1 if T.verdict == VIOLATED else 2)
    return T


def decompose_tilting(M: GradedModule, order: StratOrder) -> Optional[List[Summand]]:
    """
    Read a direct sum of shifted tilting modules off its standard layers.

    Top classes first: every layer Δ(mu)<s> not yet explained starts a
    summand T(mu)<s>, whose own layers are then subtracted. Layers in the
    last band of a cut window are ignored. None when the layers do not add up.
    """
    A = M.algebra
    report = peel(M, order)
    if not report.succeeded:
        return None
    remaining = report.multiplicities(include_boundary=True)
    horizon = None if M.hi_exact else M.hi - _width(A)

    def reliable(s: int) -> bool:
        return horizon is None or -s <= horizon

    summands: List[Summand] = []
    for cls in reversed(order.classes):
        for mu in cls:
            for s in sorted((s for v, s in remaining if v == mu), reverse=True):
                n = remaining.get((mu, s), 0)
                if not n or not reliable(s):
                    continue
                T = tilting_module(A, order, mu)
                if n < 0 or not T.constructible:
                    return None
                for layer in T.layers:
                    key = (layer.vertex, layer.shift + s)
                    remaining[key] = remaining.get(key, 0) - n
                summands.extend([Summand("T", mu, s)] * n)
    if any(n and reliable(s) for (_, s), n in remaining.items()):
        return None
    return summands


@dataclass
class TiltingSummary:
    vertex: str
    dims: Dict[str, List[int]]
    lo: int
    finite: bool
    verdict: str
    indecomposable: bool
    delta_layers: List[Layer]
    nabla_layers: Dict[Tuple[str, int], int]


def characteristic_tilting_summary(A: GradedAlgebra, order: StratOrder) -> List[TiltingSummary]:
    """Per vertex: dimensions, standard and proper costandard layers of T(lam)."""
    summaries = []
    width = _width(A)
    for lam in A.vertices:
        T = tilting_module(A, order, lam)
        M = T.module
        nabla: Dict[Tuple[str, int], int] = {}
        if T.constructible:
            for mu in A.vertices:
                D = strat_module(A, order, "delta", mu)
                for j in range(-M.hi, -M.lo + 1):
                    if not M.hi_exact and -j > M.hi - 2 * width:
                        continue
                    n = mod.hom_dim(mod.shift(D, j), M)
                    if n:
                        nabla[(mu, j)] = n
        summaries.append(TiltingSummary(lam, M.dimension_vector(), M.lo, M.hi_exact, T.verdict,
                                        T.indecomposable, T.layers + T.pending, nabla))
    return summaries


# ============ TILTING COMPLEXES ============

@dataclass
class TiltingComplex:
    """
    A complex of shifted tilting modules with componentwise differentials.

    ``components[(i, a, b)]`` maps summand a at position i to summand b at
    position i + 1. A resolution also keeps ``augmentation``: the maps from
    the position-0 summands onto the resolved module.
    """

    label: str
    terms: Dict[int, List[Summand]]
    summand_modules: Dict[int, List[GradedModule]]
    components: Dict[Tuple[int, int, int], ModuleMap] = field(default_factory=dict)
    augmentation: List[ModuleMap] = field(default_factory=list)
    complete: bool = True

    def positions(self) -> List[int]:
        return sorted(i for i, t in self.terms.items() if t)

    def component(self, i: int, a: int, b: int) -> ModuleMap:
        f = self.components.get((i, a, b))
        if f is not None:
            return f
        return mod.zero_map(self.summand_modules[i][a], self.summand_modules[i + 1][b])

    def to_complex(self) -> Complex:
        modules: Dict[int, GradedModule] = {}
        offsets: Dict[int, List[Dict[Block, int]]] = {}
        for i in self.positions():
            modules[i], offsets[i] = mod.direct_sum(self.summand_modules[i],
                                                    label=" + ".join(str(s) for s in self.terms[i]))
        differentials = {}
        for i in self.positions():
            if i + 1 not in modules:
                continue
            K = modules[i].field
            blocks = {}
            for b in modules[i].blocks():
                n = modules[i + 1].dim(*b)
                if not n:
                    continue
                rows: Dict[int, Dict[int, object]] = {}
                for (p, x, y), f in self.components.items():
                    if p != i or b not in offsets[i][x] or b not in offsets[i + 1][y]:
                        continue
                    r0, c0 = offsets[i + 1][y][b], offsets[i][x][b]
                    for r, row in f.block(b).items():
                        target = rows.setdefault(r0 + r, {})
                        for c, value in row.items():
                            target[c0 + c] = value
                blocks[b] = linalg.matrix(rows, (n, modules[i].dim(*b)), K)
            differentials[i] = ModuleMap(modules[i], modules[i + 1], blocks)
        terms = {i: list(self.terms[i]) for i in self.positions()}
        return Complex(terms, modules, differentials, True, self.label)

    def term_list(self) -> List[Tuple[int, List[str]]]:
        return [(i, [str(s) for s in self.terms[i]]) for i in self.positions()]


def tilting_coresolution(A: GradedAlgebra, order: StratOrder, lam: str) -> Complex:
    """
    0 -> Δ(lam) -> T_0 -> T_1 -> ... by envelopes of successive cokernels.

    Raises:
        RefusedError: a tilting module or an envelope is not constructible, or
            the coresolution does not stop within |Λ| steps
    """
    label = f"Δ({lam})"
    T = require_tilting(A, order, lam)
    terms = {0: [Summand("T", lam, 0)]}
    modules = {0: T.module}
    differentials: Dict[int, ModuleMap] = {}
    C, to_cokernel = mod.quotient_module(T.module, mod.image(T.inclusion), label="C1")
    k = 1
    while not C.is_zero():
        if k >= len(A.vertices) + 1:
            raise RefusedError(f"coresolution does not stop after {k - 1} steps", provenance=label)
        done = complete(C, order, list(reversed(order.classes)), label=f"T{k}")
        if not done.constructible:
            raise RefusedError(f"envelope of the cokernel at position {k} is not constructible", provenance=label)
        summands = decompose_tilting(done.module, order)
        if summands is None:
            raise RefusedError(f"envelope at position {k} is not a sum of tilting modules", provenance=label)
        terms[k] = summands
        modules[k] = done.module
        differentials[k - 1] = done.inclusion.compose(to_cokernel)
        C, to_cokernel = mod.quotient_module(done.module, mod.image(done.inclusion), label=f"C{k + 1}")
        k += 1
    logger.debug("coresolution of %s has %d terms", label, k)
    return Complex(terms, modules, differentials, True, f"tilting coresolution of {label}")


@dataclass
class Approximation:
    summands: List[Summand]
    modules: List[GradedModule]
    maps: List[ModuleMap]
    total: GradedModule
    offsets: List[Dict[Block, int]]
    map: ModuleMap


def right_approximation(M: GradedModule, order: StratOrder, tiltings: Dict[str, TiltingModule]) -> Approximation:
    """
    Cover M by shifted tilting modules, largest shift first.

    A map T(mu)<s> -> M is kept when it does not factor through the summands
    already chosen. When M is cut above, only shifts with every generator a
    full band below the cut are tried and the sources are cut at the top of M.
    """
    A = M.algebra
    K = M.field
    width = _width(A)
    rank = {v: i for i, v in enumerate(A.vertices)}
    candidates = []
    for mu in A.vertices:
        T = tiltings[mu]
        for s in range(T.module.lo - M.hi, T.module.hi - M.lo + 1):
            if not (T.module.hi_exact or T.module.hi - s >= M.hi):
                continue
            if not M.hi_exact and T.top_generator - s > M.hi - width:
                continue
            if any(M.dim(j - s, v) for j, v in T.generators):
                candidates.append((s, mu))
    candidates.sort(key=lambda c: (-c[0], rank[c[1]]))

    summands: List[Summand] = []
    sources: List[GradedModule] = []
    maps: List[ModuleMap] = []
    for s, mu in candidates:
        src = mod.shift(tiltings[mu].module, s)
        if not M.hi_exact:
            src = mod.restrict(src, src.lo, M.hi)
        H = mod.hom_space(src, M)
        if not H.dim:
            continue
        layout, size = mod.map_layout(src, M)
        through = [mod.flatten_map(h.compose(u), layout)
                   for prev, h in zip(sources, maps) for u in mod.hom_space(src, prev).basis]
        span = linalg.span(through, size, K)
        for f in H.basis:
            vec = mod.flatten_map(f, layout)
            if span.contains(K, vec):
                continue
            span = linalg.sum_subspaces(span, linalg.span([vec], size, K), K)
            summands.append(Summand("T", mu, s))
            sources.append(src)
            maps.append(f)
    if not sources:
        total = mod.zero_module(A, M.lo)
        return Approximation([], [], [], total, [], mod.zero_map(total, M))
    total, offsets = mod.direct_sum(sources, label=" + ".join(str(s) for s in summands))
    blocks = {}
    for b in total.blocks():
        n = M.dim(*b)
        if not n:
            continue
        cols: List[linalg.Vector] = [{} for _ in range(total.dim(*b))]
        for k, h in enumerate(maps):
            if b not in offsets[k]:
                continue
            for c, col in enumerate(linalg.columns(h.block(b))):
                cols[offsets[k][b] + c] = col
        blocks[b] = linalg.from_columns(cols, n, K)
    return Approximation(summands, sources, maps, total, offsets, ModuleMap(total, M, blocks))


def _covers(f: ModuleMap, horizon: Optional[int]) -> bool:
    for b, n in f.target.dims.items():
        if n and (horizon is None or b[0] <= horizon) and linalg.rank(f.block(b)) != n:
            return False
    return True


def _component(f: ModuleMap, offsets: Dict[Block, int], target: GradedModule) -> ModuleMap:
    """The part of a map into a direct sum that lands in one summand."""
    K = target.field
    blocks = {}
    for b, mat in f.blocks.items():
        n = target.dim(*b)
        if not n or b not in offsets:
            continue
        off = offsets[b]
        rows = {r - off: row for r, row in mat.items() if off <= r < off + n}
        blocks[b] = linalg.matrix(rows, (n, mat.shape[1]), K)
    return ModuleMap(f.source, target, blocks)


def tilting_resolution(M: GradedModule, order: StratOrder, label: Optional[str] = None) -> TiltingComplex:
    """
    ... -> T_1 -> T_0 -> M by right approximations of successive kernels.

    The resolution is incomplete when a kernel survives only in the last
    band of a cut window or when |Λ| + 1 steps did not suffice.

    Raises:
        RefusedError: a tilting module is not constructible, or a kernel is
            not covered by tilting modules
    """
    A = M.algebra
    width = _width(A)
    label = label or f"tilting resolution of {M.label}"
    tiltings = {mu: require_tilting(A, order, mu) for mu in A.vertices}
    terms: Dict[int, List[Summand]] = {}
    modules: Dict[int, List[GradedModule]] = {}
    components: Dict[Tuple[int, int, int], ModuleMap] = {}
    augmentation: List[ModuleMap] = []
    previous: Optional[Tuple[ModuleMap, List[Dict[Block, int]]]] = None
    target = M
    finished = False
    for k in range(len(A.vertices) + 2):
        horizon = None if target.hi_exact else target.hi - width
        if not any(n for b, n in target.dims.items() if horizon is None or b[0] <= horizon):
            finished = target.is_zero()
            break
        approx = right_approximation(target, order, tiltings)
        if not _covers(approx.map, horizon):
            raise RefusedError(f"{target.label or 'kernel'} is not covered by tilting modules", provenance=label)
        terms[-k] = approx.summands
        modules[-k] = approx.modules
        if previous is None:
            augmentation = approx.maps
        else:
            inclusion, prev_offsets = previous
            for a, h in enumerate(approx.maps):
                into_total = inclusion.compose(h)
                for b, tgt in enumerate(modules[-k + 1]):
                    part = _component(into_total, prev_offsets[b], tgt)
                    if not part.is_zero():
                        components[(-k, a, b)] = part
        kernel_module, inclusion = mod.as_module(mod.kernel(approx.map), label=f"kernel {k + 1}")
        previous = (inclusion, approx.offsets)
        target = kernel_module
    logger.debug("%s: %d positions, complete=%s", label, len(terms), finished)
    return TiltingComplex(label, terms, modules, components, augmentation, finished)


# ============ CHAIN MAPS AND CONES ============

def lift_chain_map(X: TiltingComplex, Y: TiltingComplex, f: ModuleMap) -> Dict[Tuple[int, int, int], ModuleMap]:
    """
    Lift f: M -> M' to the tilting resolutions X of M and Y of M'.

    ``phi[(i, a, b)]`` maps summand a of X to summand b of Y, both at
    position i.

    Raises:
        RefusedError: some component has no solution
    """
    K = f.source.field
    phi: Dict[Tuple[int, int, int], ModuleMap] = {}
    for i in sorted(X.positions(), reverse=True):
        ys = Y.summand_modules.get(i, [])
        for a, src in enumerate(X.summand_modules[i]):
            unknowns = [(b, u) for b, tgt in enumerate(ys) for u in mod.hom_space(src, tgt).basis]
            # one equation block per target: M' at position 0, the summands of Y^(i+1) otherwise
            if i == 0:
                goals = [(f.target, f.compose(X.augmentation[a]))]
            else:
                goals = []
                for c, nxt in enumerate(Y.summand_modules.get(i + 1, [])):
                    terms = [(K.one, phi[(i + 1, x, c)].compose(X.component(i, a, x)))
                             for x in range(len(X.summand_modules[i + 1])) if (i + 1, x, c) in phi]
                    goals.append((nxt, mod.combine_maps(src, nxt, terms)))
            layouts = []
            total = 0
            for tgt, _ in goals:
                layout, size = mod.map_layout(src, tgt)
                layouts.append((layout, total))
                total += size
            rhs: linalg.Vector = {}
            for (layout, base), (_, g) in zip(layouts, goals):
                rhs.update(linalg.shift_vector(mod.flatten_map(g, layout), base))
            columns = []
            for b, u in unknowns:
                col: linalg.Vector = {}
                for c, (layout, base) in enumerate(layouts):
                    image = Y.augmentation[b].compose(u) if i == 0 else Y.component(i, b, c).compose(u)
                    col.update(linalg.shift_vector(mod.flatten_map(image, layout), base))
                columns.append(col)
            if not unknowns:
                if rhs:
                    raise RefusedError(f"no lift for summand {X.terms[i][a]} at position {i}", provenance=X.label)
                continue
            solution = linalg.solve(linalg.from_columns(columns, total, K), rhs)
            if solution is None:
                raise RefusedError(f"no lift for summand {X.terms[i][a]} at position {i}", provenance=X.label)
            x, _ = solution
            for b, tgt in enumerate(ys):
                parts = [(x.get(k, K.zero), u) for k, (bb, u) in enumerate(unknowns) if bb == b]
                g = mod.combine_maps(src, tgt, parts)
                if not g.is_zero():
                    phi[(i, a, b)] = g
    return phi


def cocone(X: TiltingComplex, Y: TiltingComplex, phi: Dict[Tuple[int, int, int], ModuleMap],
           label: str) -> TiltingComplex:
    """
    Position i holds X^i followed by Y^(i-1); the differential is d_X on X,
    phi from X^i to Y^i, and -d_Y on Y.
    """
    positions = set(X.positions()) | {i + 1 for i in Y.positions()}
    terms: Dict[int, List[Summand]] = {}
    modules: Dict[int, List[GradedModule]] = {}
    for i in sorted(positions):
        terms[i] = list(X.terms.get(i, [])) + list(Y.terms.get(i - 1, []))
        modules[i] = list(X.summand_modules.get(i, [])) + list(Y.summand_modules.get(i - 1, []))

    def width_of(i: int) -> int:
        return len(X.terms.get(i, []))

    components: Dict[Tuple[int, int, int], ModuleMap] = {}
    for (i, a, b), g in X.components.items():
        components[(i, a, b)] = g
    for (i, a, b), g in phi.items():
        components[(i, a, width_of(i + 1) + b)] = g
    for (q, a, b), g in Y.components.items():
        i = q + 1
        negated = mod.combine_maps(g.source, g.target, [(-g.source.field.one, g)])
        components[(i, width_of(i) + a, width_of(i + 1) + b)] = negated
    return TiltingComplex(label, terms, modules, components, [], X.complete and Y.complete)


def _invertible_part(g: ModuleMap) -> Optional[ModuleMap]:
    """Blockwise inverse of g on the degrees both ends share, if every such block is invertible."""
    M, N = g.source, g.target
    top = min(M.hi, N.hi)
    blocks = {}
    for b in set(M.blocks()) | set(N.blocks()):
        if b[0] > top:
            continue
        n = M.dim(*b)
        if n != N.dim(*b) or linalg.rank(g.block(b)) != n:
            return None
        blocks[b] = linalg.inverse(g.block(b))
    return ModuleMap(N, M, blocks)


def _cancel(C: TiltingComplex, i: int, a: int, b: int, inverse: ModuleMap) -> TiltingComplex:
    """Remove the pair (a at i, b at i + 1) joined by an isomorphism, by Gaussian elimination."""
    K = inverse.source.field
    keep = {p: [x for x in range(len(C.terms[p]))] for p in C.terms}
    keep[i] = [x for x in keep[i] if x != a]
    keep[i + 1] = [y for y in keep[i + 1] if y != b]
    index = {p: {old: new for new, old in enumerate(xs)} for p, xs in keep.items()}
    components: Dict[Tuple[int, int, int], ModuleMap] = {}
    for (p, x, y), g in C.components.items():
        if x in index.get(p, {}) and y in index.get(p + 1, {}):
            components[(p, index[p][x], index[p + 1][y])] = g
    for x in keep[i]:
        into_b = C.components.get((i, x, b))
        if into_b is None:
            continue
        for y in keep[i + 1]:
            from_a = C.components.get((i, a, y))
            if from_a is None:
                continue
            base = C.component(i, x, y)
            corrected = mod.combine_maps(base.source, base.target,
                                         [(K.one, base), (-K.one, from_a.compose(inverse.compose(into_b)))])
            key = (i, index[i][x], index[i + 1][y])
            if corrected.is_zero():
                components.pop(key, None)
            else:
                components[key] = corrected
    terms = {p: [C.terms[p][x] for x in xs] for p, xs in keep.items()}
    modules = {p: [C.summand_modules[p][x] for x in xs] for p, xs in keep.items()}
    return TiltingComplex(C.label, terms, modules, components, [], C.complete)


def minimalize(C: TiltingComplex) -> TiltingComplex:
    """Cancel isomorphism components between equal summands in adjacent positions until none is left."""
    while True:
        for key in sorted(C.components):
            i, a, b = key
            if C.terms[i][a] != C.terms[i + 1][b]:
                continue
            inverse = _invertible_part(C.components[key])
            if inverse is not None:
                logger.debug("cancelling %s between positions %d and %d", C.terms[i][a], i, i + 1)
                C = _cancel(C, i, a, b, inverse)
                break
        else:
            return C


# ============ CLASSIFICATION ============

def _hom_reliable(source: TiltingModule, target: GradedModule) -> bool:
    need = source.top_generator + 2 * _width(target.algebra)
    return (target.hi_exact or need <= target.hi) and (source.module.hi_exact or need <= source.module.hi)


@lru_cache(maxsize=2048)
def tilting_hom(A: GradedAlgebra, order: StratOrder, lam: str, mu: str, d: int) -> Tuple[HomSpace, bool]:
    """hom(T(lam), T(mu)<d>) and whether it is reliable in the window."""
    source = require_tilting(A, order, lam)
    target = mod.shift(require_tilting(A, order, mu).module, d)
    reliable = _hom_reliable(source, target)
    if not any(target.dim(j, v) for j, v in source.generators):
        return HomSpace(source.module, target, [], True), reliable
    return mod.hom_space(source.module, target), reliable


@dataclass(frozen=True)
class HomCell:
    dim: int
    reliable: bool


def hom_grading_table(A: GradedAlgebra, order: StratOrder, degrees: Iterable[int]) -> Dict[Tuple[str, str, int], HomCell]:
    """dim hom(T(lam), T(mu)<d>) for every pair of vertices and every d listed."""
    table = {}
    for d in degrees:
        for lam in A.vertices:
            for mu in A.vertices:
                H, reliable = tilting_hom(A, order, lam, mu, d)
                table[(lam, mu, d)] = HomCell(H.dim, reliable)
    return table


@dataclass
class Classification:
    """
    ``status`` is the highest rung of the ladder certified in the window;
    ``verdict`` is holds at the top rung and otherwise the verdict of the
    first rung that was not reached. ``boundary`` names the resolutions that
    were linear in every computed position but did not end inside the window.
    """

    status: str
    verdict: str
    reasons: List[str] = field(default_factory=list)
    stratification: Optional[StratificationResult] = None
    tiltings: Dict[str, TiltingModule] = field(default_factory=dict)
    coresolutions: Dict[str, Complex] = field(default_factory=dict)
    resolutions: Dict[str, TiltingComplex] = field(default_factory=dict)
    boundary: List[str] = field(default_factory=list)


def _adapted(A: GradedAlgebra, order: StratOrder) -> Tuple[str, List[str]]:
    """No maps T(lam) -> T(mu)<d> for d < 0, and only the scalars in degree zero."""
    verdicts = []
    reasons = []
    for (lam, mu, d), cell in hom_grading_table(A, order, range(-A.N, 1)).items():
        expected = 1 if (d == 0 and lam == mu) else 0
        if cell.dim == expected:
            continue
        if cell.reliable or cell.dim < expected:
            verdicts.append(VIOLATED)
            reasons.append(f"hom(T({lam}), T({mu})<{d}>) has dimension {cell.dim}")
        elif cell.dim > expected:
            verdicts.append(UNDETERMINED)
            reasons.append(f"hom(T({lam}), T({mu})<{d}>) near the window boundary")
    return combine_verdicts(verdicts), reasons


def _balanced(A: GradedAlgebra, order: StratOrder, result: Classification) -> Tuple[str, List[str]]:
    verdicts = []
    reasons = []
    for lam in A.vertices:
        try:
            C = tilting_coresolution(A, order, lam)
            result.coresolutions[lam] = C
            if not is_linear(C, "tilting"):
                verdicts.append(VIOLATED)
                reasons.append(f"tilting coresolution of Δ({lam}) is not linear")
        except RefusedError as e:
            verdicts.append(UNDETERMINED)
            reasons.append(e.detail)
        try:
            R = tilting_resolution(strat_module(A, order, "proper_nabla", lam), order)
            result.resolutions[lam] = R
            if not is_linear(R.to_complex(), "tilting"):
                verdicts.append(VIOLATED)
                reasons.append(f"tilting resolution of ∇̄({lam}) is not linear")
            elif not R.complete:
                # linear in every computed position: holds at N
                result.boundary.append(f"tilting resolution of ∇̄({lam}) continues past position {min(R.positions())}")
        except RefusedError as e:
            verdicts.append(UNDETERMINED)
            reasons.append(e.detail)
    return combine_verdicts(verdicts), reasons


def classify(A: GradedAlgebra, order: StratOrder) -> Classification:
    """
    Climb not-stratified < stratified < weakly-adapted < adapted < balanced.
    """
    strat = is_standardly_stratified(A, order)
    result = Classification(LADDER[0], strat.verdict, stratification=strat)
    if strat.verdict != HOLDS:
        result.reasons = [f"K({lam}): {'; '.join(r.diagnosis) or r.status}"
                          for lam, r in strat.reports.items() if strat.verdicts[lam] != HOLDS]
        return result
    result.status = "stratified"

    result.tiltings = {lam: tilting_module(A, order, lam) for lam in A.vertices}
    verdicts = []
    for lam, T in result.tiltings.items():
        if not T.constructible:
            verdicts.append(T.verdict)
            result.reasons.append(f"{T.label} not finitely constructible at N = {A.N}")
        elif T.nabla_failures:
            verdicts.append(VIOLATED)
            result.reasons.append(f"{T.label} fails the proper costandard test: {'; '.join(T.nabla_failures)}")
    verdict = combine_verdicts(verdicts)
    if verdict != HOLDS:
        result.verdict = verdict
        return result
    result.status = "weakly-adapted"

    verdict, reasons = _adapted(A, order)
    if verdict != HOLDS:
        result.verdict, result.reasons = verdict, reasons
        return result
    result.status = "adapted"

    verdict, reasons = _balanced(A, order, result)
    if verdict != HOLDS:
        result.verdict, result.reasons = verdict, reasons
        return result
    result.status = "balanced"
    result.verdict = HOLDS
    logger.info("classified as %s at N = %d", result.status, A.N)
    return result


# ============ SIMPLES ============

def simple_as_tilting_complex(A: GradedAlgebra, order: StratOrder, lam: str) -> TiltingComplex:
    """
    A linear complex of tilting modules quasi-isomorphic to L(lam).

    L(lam) is the kernel of ∇̄(lam) -> ∇̄(lam)/L(lam). Both modules get tilting
    resolutions, the projection lifts to a chain map, and its cocone is
    minimalized. When ∇̄(lam) = L(lam) the resolution of ∇̄(lam) is the answer.

    Raises:
        RefusedError: the algebra is not balanced in the window, the cokernel
            is not filtered by proper costandard modules, or the result is not
            linear
    """
    status = classify(A, order)
    if status.status != "balanced":
        raise RefusedError(f"algebra is {status.status}, not balanced", provenance=f"L({lam})",
                           exit_code=1 if status.verdict == VIOLATED else 2)
    K = A.field
    nabla = strat_module(A, order, "proper_nabla", lam)
    X = tilting_resolution(nabla, order, label=f"resolution of {nabla.label}")
    socle = mod.generate(nabla, [((0, lam), {0: K.one})])
    coker, projection = mod.quotient_module(nabla, socle, label=f"{nabla.label}/L({lam})")
    if coker.is_zero():
        result = TiltingComplex(f"L({lam})", X.terms, X.summand_modules, X.components, [], X.complete)
    else:
        failures = certify_proper_nabla(coker, order)
        if failures:
            raise RefusedError(f"{coker.label} is not filtered by proper costandard modules: {'; '.join(failures)}",
                               provenance=f"L({lam})")
        Y = tilting_resolution(coker, order, label=f"resolution of {coker.label}")
        phi = lift_chain_map(X, Y, projection)
        result = minimalize(cocone(X, Y, phi, f"L({lam})"))
    if not is_linear(result.to_complex(), "tilting"):
        raise RefusedError(f"complex {result.term_list()} is not linear", provenance=f"L({lam})", exit_code=1)
    return result
