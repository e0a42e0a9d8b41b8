"""
Ringel and Koszul duals as truncated graded presentations.

Both duals are first known through structure constants: a basis of every
graded piece e_t B_d e_s and the products of basis elements. A presentation
is read off degree by degree: arrows span a complement of the square of the
radical, relations span the kernel of path evaluation modulo the ideal of
lower relations.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Callable, Dict, List, Optional, Tuple

from app.config import settings
from app.engine import linalg
from app.engine import modules as mod
from app.engine.algebra import (
    AlgebraPresentation,
    Arrow,
    Element,
    GradedAlgebra,
    Path,
    Quiver,
    Relation,
    build_algebra,
    quotient_by_class,
    to_fraction,
)
from app.engine.homology import ProjectiveResolution, is_koszul, minimal_projective_resolution
from app.engine.linalg import Vector
from app.engine.modules import GradedModule, ModuleMap
from app.engine.order import StratOrder
from app.engine.strat import HOLDS, UNDETERMINED, VIOLATED, strat_module
from app.engine.tilting import LADDER, Classification, classify, require_tilting, tilting_hom
from app.exceptions import RefusedError

logger = logging.getLogger(__name__)

ISOMORPHIC = "isomorphic"
DISTINGUISHED = "distinguished"

Piece = Tuple[int, str, str]


# ============ STRUCTURE CONSTANTS ============

@dataclass
class GradedStructure:
    """
    A graded algebra known through bases and products.

    ``dims[(d, s, t)]`` is the dimension of the degree-d part spanned by paths
    from s to t. ``product(d1, s, t, i, d2, u, j)`` multiplies basis element i
    of (d1, s, t) by basis element j of (d2, t, u), the first factor first,
    and returns coordinates in (d1 + d2, s, u).
    """

    vertices: Tuple[str, ...]
    top: int
    field: object
    dims: Dict[Piece, int]
    product: Callable[[int, str, str, int, int, str, int], Vector]

    def dim(self, d: int, s: str, t: str) -> int:
        return self.dims.get((d, s, t), 0)

    def multiply(self, d1: int, s: str, t: str, x: Vector, d2: int, u: str, y: Vector) -> Vector:
        K = self.field
        terms = []
        for i, a in x.items():
            for j, b in y.items():
                terms.append((a * b, self.product(d1, s, t, i, d2, u, j)))
        return linalg.combine(K, terms)


@dataclass
class DualAlgebra:
    """
    A computed dual: its presentation, stratification order and the degree up
    to which the structure constants are reliable.

    ``generators`` maps each arrow to its piece and its coordinates there;
    ``mismatches`` lists degrees where the presentation does not reproduce the
    structure constants (empty on success).
    """

    name: str
    presentation: AlgebraPresentation
    order: StratOrder
    reliable_degree: int
    generators: Dict[str, Tuple[int, str, str, Vector]] = field(default_factory=dict)
    mismatches: List[str] = field(default_factory=list)
    generator_maps: Dict[str, ModuleMap] = field(default_factory=dict)

    def algebra(self) -> GradedAlgebra:
        return build_algebra(self.presentation)


def _square_of_radical(structure: GradedStructure, d: int, s: str, t: str) -> List[Vector]:
    V = structure.vertices
    out = []
    for d1 in range(1, d):
        for m in V:
            for i in range(structure.dim(d1, s, m)):
                for j in range(structure.dim(d - d1, m, t)):
                    out.append(structure.product(d1, s, m, i, d - d1, t, j))
    return out


def present(structure: GradedStructure, prefix: str, field_name: str) -> Tuple[AlgebraPresentation, Dict, List[str]]:
    """
    Quiver and relations of a graded algebra given by structure constants.

    Args:
        structure: bases and products up to degree structure.top
        prefix: arrow names are prefix1, prefix2, ...
        field_name: field of the output presentation

    Returns:
        (presentation truncated at structure.top, generators, mismatches)
    """
    K = structure.field
    V = structure.vertices
    top = structure.top
    arrows: List[Arrow] = []
    generators: Dict[str, Tuple[int, str, str, Vector]] = {}
    for d in range(1, top + 1):
        for s in V:
            for t in V:
                n = structure.dim(d, s, t)
                if not n:
                    continue
                square = linalg.span(_square_of_radical(structure, d, s, t), n, K)
                for c in square.complement_indices():
                    name = f"{prefix}{len(arrows) + 1}"
                    arrows.append(Arrow(name, s, t, d))
                    generators[name] = (d, s, t, {c: K.one})

    # words[d]: (word, source, target, value)
    words: Dict[int, List[Tuple[Tuple[str, ...], str, str, Vector]]] = {d: [] for d in range(top + 1)}
    for d in range(1, top + 1):
        for a in arrows:
            e = a.degree
            value = generators[a.name][3]
            if e == d:
                words[d].append(((a.name,), a.source, a.target, value))
            elif e < d:
                for w, s, m, prefix_value in words[d - e]:
                    if m == a.source:
                        image = structure.multiply(d - e, s, m, prefix_value, e, a.target, value)
                        words[d].append((w + (a.name,), s, a.target, image))

    relations: List[Relation] = []
    mismatches: List[str] = []
    ideal: Dict[Piece, List[Dict[Tuple[str, ...], object]]] = {}
    for d in range(1, top + 1):
        for s in V:
            for t in V:
                n = structure.dim(d, s, t)
                block = [(w, value) for w, ss, tt, value in words[d] if ss == s and tt == t]
                if not block:
                    if n:
                        mismatches.append(f"degree {d} from {s} to {t}: no paths for dimension {n}")
                    continue
                index = {w: k for k, (w, _) in enumerate(block)}
                evaluation = linalg.from_columns([value for _, value in block], n, K)
                rank, kernel = linalg.rank_kernel(evaluation)
                if rank != n:
                    mismatches.append(f"degree {d} from {s} to {t}: paths span {rank} of {n}")
                extended = []
                for a in arrows:
                    if a.target == t:
                        for r in ideal.get((d - a.degree, s, a.source), []):
                            extended.append({index[w + (a.name,)]: c for w, c in r.items()})
                    if a.source == s:
                        for r in ideal.get((d - a.degree, a.target, t), []):
                            extended.append({index[(a.name,) + w]: c for w, c in r.items()})
                lower = linalg.span(extended, len(block), K)
                full = []
                for vec in kernel:
                    full.append({block[k][0]: c for k, c in vec.items()})
                    if lower.contains(K, vec):
                        continue
                    lower = linalg.sum_subspaces(lower, linalg.span([vec], len(block), K), K)
                    terms = tuple((to_fraction(K, c), block[k][0]) for k, c in sorted(vec.items()))
                    relations.append(Relation(terms))
                ideal[(d, s, t)] = full
    presentation = AlgebraPresentation(Quiver(tuple(V), tuple(arrows)), tuple(relations), field_name, top)
    B = build_algebra(presentation)
    for d in range(top + 1):
        for s in V:
            for t in V:
                want = structure.dim(d, s, t) if d else int(s == t)
                if len(B.block(d, s, t)) != want:
                    mismatches.append(f"degree {d} from {s} to {t}: presentation gives "
                                      f"{len(B.block(d, s, t))}, expected {want}")
    logger.debug("presented %d arrows and %d relations up to degree %d", len(arrows), len(relations), top)
    return presentation, generators, mismatches


def _coordinates(f: ModuleMap, basis: List[ModuleMap]) -> Vector:
    """Coordinates of f in a hom basis sharing its source and target dims."""
    if not basis:
        if not f.is_zero():
            raise RefusedError("a composite of maps between tilting modules left the window", provenance="R(A)")
        return {}
    layout, size = mod.map_layout(basis[0].source, basis[0].target)
    columns = [mod.flatten_map(b, layout) for b in basis]
    solved = linalg.solve(linalg.from_columns(columns, size, f.source.field), mod.flatten_map(f, layout))
    if solved is None:
        raise RefusedError("a composite of maps between tilting modules is outside the hom basis", provenance="R(A)")
    return solved[0]


# ============ RINGEL DUAL ============

def _reliable_degree(A: GradedAlgebra, order: StratOrder) -> int:
    reliable = -1
    for d in range(A.N + 1):
        if not all(tilting_hom(A, order, lam, mu, d)[1] for lam in A.vertices for mu in A.vertices):
            break
        reliable = d
    return reliable


def ringel_structure(A: GradedAlgebra, order: StratOrder) -> Tuple[GradedStructure, Dict[Piece, List[ModuleMap]]]:
    """
    Structure constants of the graded endomorphism algebra of the tilting modules.

    Piece (d, lam, mu) is hom(T(lam), T(mu)<d>); the product of f in
    (d1, s, t) and g in (d2, t, u) is g<d1> after f.
    """
    top = _reliable_degree(A, order)
    if top < 0:
        raise RefusedError("homs between tilting modules are not reliable in degree 0", provenance="R(A)",
                           exit_code=2)
    bases: Dict[Piece, List[ModuleMap]] = {}
    for d in range(top + 1):
        for lam in A.vertices:
            for mu in A.vertices:
                H, _ = tilting_hom(A, order, lam, mu, d)
                if H.basis:
                    bases[(d, lam, mu)] = list(H.basis)

    @lru_cache(maxsize=None)
    def product_of(d1: int, s: str, t: str, i: int, d2: int, u: str, j: int) -> Vector:
        f = bases[(d1, s, t)][i]
        g = bases[(d2, t, u)][j]
        return _coordinates(mod.shift_map(g, d1).compose(f), bases.get((d1 + d2, s, u), []))

    dims = {piece: len(basis) for piece, basis in bases.items()}
    return GradedStructure(tuple(A.vertices), top, A.field, dims, product_of), bases


def _require_rung(A: GradedAlgebra, order: StratOrder, rung: str, provenance: str) -> Classification:
    status = classify(A, order)
    if LADDER.index(status.status) < LADDER.index(rung):
        reasons = "; ".join(status.reasons)
        raise RefusedError(f"algebra is {status.status}, not {rung}" + (f": {reasons}" if reasons else ""),
                           provenance=provenance, exit_code=1 if status.verdict == VIOLATED else 2)
    return status


def ringel_dual(A: GradedAlgebra, order: StratOrder) -> DualAlgebra:
    """
    R(A), the graded endomorphism algebra of the characteristic tilting module.

    The presentation is truncated at the largest degree in which every hom
    space between tilting modules is reliable; its order is the opposite of
    the given one.

    Raises:
        RefusedError: A is not adapted in the window, or no positive degree
            is reliable
    """
    _require_rung(A, order, "adapted", "R(A)")
    structure, bases = ringel_structure(A, order)
    if structure.top < 1:
        raise RefusedError(f"homs between tilting modules are reliable only in degree 0 at N = {A.N}",
                           provenance="R(A)", exit_code=2)
    presentation, generators, mismatches = present(structure, "r", A.presentation.field)
    generator_maps = {}
    for name, (d, s, t, vec) in generators.items():
        basis = bases[(d, s, t)]
        generator_maps[name] = mod.combine_maps(basis[0].source, basis[0].target,
                                                [(c, basis[i]) for i, c in vec.items()])
    logger.info("R(A): %d arrows, %d relations, reliable to degree %d",
                len(presentation.quiver.arrows), len(presentation.relations), structure.top)
    return DualAlgebra("R(A)", presentation, order.opposite(), structure.top, generators, mismatches,
                       generator_maps)


@dataclass
class StandardImage:
    vertex: str
    module: GradedModule
    expected: GradedModule
    dims_match: bool
    isomorphic: bool


def ringel_image_of_standard(A: GradedAlgebra, order: StratOrder, lam: str,
                             dual: Optional[DualAlgebra] = None) -> StandardImage:
    """
    hom(Δ(lam), T) as a graded R(A)-module, compared with the standard R(A)-module.

    Degree d at vertex mu is hom(Δ(lam), T(mu)<d>); an arrow of R(A) acts by
    composing with its map of tilting modules.
    """
    dual = dual or ringel_dual(A, order)
    B = dual.algebra()
    K = A.field
    top = dual.reliable_degree
    D = strat_module(A, order, "delta", lam)
    targets = {(d, mu): mod.shift(require_tilting(A, order, mu).module, d)
               for d in range(top + 1) for mu in A.vertices}
    bases = {b: list(mod.hom_space(D, T).basis) for b, T in targets.items()}
    dims = {b: len(basis) for b, basis in bases.items() if basis}
    actions = {}
    for a in B.arrow_list:
        f = dual.generator_maps[a.name]
        for d in range(top + 1 - a.degree):
            source = bases[(d, a.source)]
            target = bases[(d + a.degree, a.target)]
            if not source or not target:
                continue
            columns = [_coordinates(mod.shift_map(f, d).compose(g), target) for g in source]
            actions[(a.name, d)] = linalg.from_columns(columns, len(target), K)
    image = GradedModule(B, 0, top, dims, actions, True, False, f"hom(Δ({lam}), T)")
    expected = strat_module(B, dual.order, "delta", lam)
    dims_match = all(image.dim(j, v) == expected.dim(j, v) for j in range(top + 1) for v in B.vertices)
    isomorphic = False
    if dims_match:
        H = mod.hom_space(expected, image)
        candidates = list(H.basis)
        if len(candidates) > 1:
            candidates.append(mod.combine_maps(expected, image, [(K.one, f) for f in H.basis]))
        isomorphic = any(mod.is_isomorphism(f) for f in candidates)
    logger.info("image of Δ(%s) in R(A): dims %s, isomorphic %s", lam, dims_match, isomorphic)
    return StandardImage(lam, image, expected, dims_match, isomorphic)


# ============ KOSZUL DUAL ============

def _yoneda_lift(source: ProjectiveResolution, i: int, x: int, target: ProjectiveResolution,
                 steps: int) -> List[List[Vector]]:
    """
    Lift the class of generator x of F_i(source) to a chain map into target.

    ``phi[m][z]`` is the image of generator z of F_{i+m}(source) in
    F_m(target), in the block lowered by the degree of x.
    """
    K = source.module.field
    v_x, g_x = source.generators(i)[x]
    head = target.terms[0].element((0, v_x), {(0, Path(v_x, v_x)): K.one})
    phi: List[List[Vector]] = [[head if z == x else {} for z in range(len(source.generators(i)))]]
    for m in range(1, steps + 1):
        k = i + m
        if k >= len(source.terms):
            break
        current: List[Vector] = []
        for z, (v_z, g_z) in enumerate(source.generators(k)):
            parts = source.terms[k - 1].decompose((g_z, v_z), source.images[k][z])
            pieces = []
            for w, element in parts.items():
                value = phi[m - 1][w]
                if not value:
                    continue
                g_w = source.generators(k - 1)[w][1]
                image = target.terms[m - 1].module.act_element(element, g_w - g_x, value)
                if image is None:
                    raise RefusedError(f"Yoneda lift leaves the window at position {m}", provenance="E(A)", exit_code=2)
                pieces.append((K.one, image))
            rhs = linalg.combine(K, pieces)
            if not rhs:
                current.append({})
                continue
            if m >= len(target.terms):
                raise RefusedError(f"Yoneda lift needs position {m} of a finished resolution", provenance="E(A)")
            solved = linalg.solve(target.differentials[m - 1].block((g_z - g_x, v_z)), rhs)
            if solved is None:
                raise RefusedError(f"Yoneda lift has no solution at position {m}", provenance="E(A)")
            current.append(solved[0])
        phi.append(current)
    return phi


def koszul_structure(A: GradedAlgebra, depth: int) -> GradedStructure:
    """
    Structure constants of the Yoneda algebra of the simple modules.

    Piece (d, s, t) is ext^d(L(t), L(s)<-d>), with basis the generators of
    F_d in the minimal resolution of L(t) at vertex s. The product of x in
    (d1, s, t) and y in (d2, t, u) is the Yoneda composite x after y.
    """
    K = A.field
    resolutions = {lam: minimal_projective_resolution(mod.simple(A, lam), depth) for lam in A.vertices}
    pieces: Dict[Piece, List[int]] = {}
    for t, res in resolutions.items():
        for d in range(1, min(depth, res.length) + 1):
            for z, (s, g) in enumerate(res.generators(d)):
                if g == d:
                    pieces.setdefault((d, s, t), []).append(z)

    @lru_cache(maxsize=None)
    def lift(u: str, d2: int, y: int, steps: int) -> Tuple[Tuple[Vector, ...], ...]:
        target = resolutions[resolutions[u].generators(d2)[y][0]]
        phi = _yoneda_lift(resolutions[u], d2, y, target, steps)
        return tuple(tuple(row) for row in phi)

    @lru_cache(maxsize=None)
    def product_of(d1: int, s: str, t: str, i: int, d2: int, u: str, j: int) -> Vector:
        x = pieces[(d1, s, t)][i]
        y = pieces[(d2, t, u)][j]
        phi = lift(u, d2, y, d1)
        if d1 >= len(phi):
            return {}
        F = resolutions[t].terms[d1]
        position = F.index((d1, s)).get((x, Path(s, s)))
        out = {}
        for k, z in enumerate(pieces.get((d1 + d2, s, u), [])):
            c = phi[d1][z].get(position) if position is not None else None
            if c:
                out[k] = c
        return out

    dims = {piece: len(zs) for piece, zs in pieces.items()}
    return GradedStructure(tuple(A.vertices), depth, K, dims, product_of)


def koszul_dual(A: GradedAlgebra, order: StratOrder, depth: int) -> DualAlgebra:
    """
    E(A), the Yoneda algebra of the simple modules, up to degree min(depth, N).

    ext^1(L(lam), L(mu)) gives arrows mu -> lam; the order is the opposite of
    the given one.

    Raises:
        RefusedError: A is not Koszul through the checked positions
    """
    top = min(depth, A.N)
    verdict, reports = is_koszul(A, top)
    if verdict != HOLDS:
        failing = [f"L({lam}): {', '.join(r.nonlinear) or 'undetermined'}"
                   for lam, r in reports.items() if r.verdict != HOLDS]
        raise RefusedError(f"algebra is not Koszul through position -{top}: {'; '.join(failing)}",
                           provenance="E(A)", exit_code=1 if verdict == VIOLATED else 2)
    structure = koszul_structure(A, top)
    presentation, generators, mismatches = present(structure, "e", A.presentation.field)
    logger.info("E(A): %d arrows, %d relations up to degree %d",
                len(presentation.quiver.arrows), len(presentation.relations), top)
    return DualAlgebra("E(A)", presentation, order.opposite(), top, generators, mismatches)


# ============ COMPARISON ============

@dataclass
class AlgebraComparison:
    verdict: str
    truncation: int
    witness: str = ""
    vertex_map: Dict[str, str] = field(default_factory=dict)
    arrow_images: Dict[str, str] = field(default_factory=dict)


def _small_vectors(n: int, K) -> List[Vector]:
    """Nonzero vectors with entries 0, 1, -1, fewest nonzero entries first."""
    values = [K.one] if K.one == -K.one else [K.one, -K.one]
    out = []
    for entries in product([K.zero] + values, repeat=n):
        vec = {i: c for i, c in enumerate(entries) if c}
        if vec:
            out.append(vec)
    out.sort(key=len)
    return out


def _to_element(paths: List[Path], vec: Vector) -> Element:
    return {paths[i]: c for i, c in vec.items()}


def _to_vector(paths: List[Path], element: Element) -> Vector:
    index = {p: i for i, p in enumerate(paths)}
    return linalg.clean({index[p]: c for p, c in element.items()})


def _square_pieces(B: GradedAlgebra, n: int) -> Dict[Piece, linalg.Subspace]:
    """Square of the radical of B, piece by piece."""
    K = B.field
    out = {}
    for d in range(2, n + 1):
        for s in B.vertices:
            for t in B.vertices:
                paths = B.block(d, s, t)
                if paths:
                    long = [{i: K.one} for i, p in enumerate(paths) if len(p.arrows) > 1]
                    out[(d, s, t)] = linalg.span(long, len(paths), K)
    return out


def _relations_hold(B1: GradedAlgebra, B2: GradedAlgebra, images: Dict[str, Element]) -> bool:
    for r in B1.presentation.relations:
        first = r.terms[0][1]
        degree = sum(B1.arrows[a].degree for a in first)
        if degree > B2.N:
            continue
        total: Element = {}
        for c, word in r.terms:
            value = images[word[0]]
            for a in word[1:]:
                value = B2.multiply(value, images[a])
            coefficient = linalg.scalar(B2.field, c)
            for p, x in value.items():
                total[p] = total.get(p, B2.field.zero) + coefficient * x
        if any(total.values()):
            return False
    return True


def _generates(B1: GradedAlgebra, B2: GradedAlgebra, pi: Dict[str, str], images: Dict[str, Element]) -> bool:
    """The images of the arrows of B1 generate every positive piece of B2."""
    K = B2.field
    spans: Dict[Piece, List[Element]] = {}
    for d in range(1, B2.N + 1):
        for a in B1.arrow_list:
            if a.degree == d:
                spans.setdefault((d, pi[a.source], pi[a.target]), []).append(images[a.name])
            elif a.degree < d:
                for (dd, s, m), elements in list(spans.items()):
                    if dd == d - a.degree and m == pi[a.source]:
                        spans.setdefault((d, s, pi[a.target]), []).extend(
                            B2.multiply(x, images[a.name]) for x in elements)
        for s in B2.vertices:
            for t in B2.vertices:
                paths = B2.block(d, s, t)
                if not paths:
                    continue
                vectors = [_to_vector(paths, x) for x in spans.get((d, s, t), [])]
                reduced = linalg.span(vectors, len(paths), K)
                if reduced.dim < len(paths):
                    return False
                spans[(d, s, t)] = [_to_element(paths, v) for v in reduced.basis()]
    return True


def _search(B1: GradedAlgebra, B2: GradedAlgebra, pi: Dict[str, str], budget: int) -> Tuple[Optional[Dict], int]:
    K = B2.field
    square = _square_pieces(B2, B2.N)
    options = []
    for a in B1.arrow_list:
        piece = (a.degree, pi[a.source], pi[a.target])
        paths = B2.block(*piece)
        if not paths:
            return None, budget
        below = square.get(piece)
        candidates = [v for v in _small_vectors(len(paths), K) if below is None or not below.contains(K, v)]
        if not candidates:
            return None, budget
        options.append([(a.name, _to_element(paths, v)) for v in candidates])
    for choice in product(*options):
        budget -= 1
        if budget < 0:
            return None, budget
        images = dict(choice)
        if _relations_hold(B1, B2, images) and _generates(B1, B2, pi, images):
            return images, budget
    return None, budget


def compare_algebras(P1: AlgebraPresentation, P2: AlgebraPresentation, bound: Optional[int] = None) -> AlgebraComparison:
    """
    Decide whether two presentations give isomorphic graded algebras at their common truncation.

    Graded Cartan matrices are compared under every vertex bijection; for
    each matching bijection, arrows of the first algebra are sent to
    combinations with coefficients 0, 1, -1 of standard paths of the second,
    and a choice is accepted when it satisfies the relations and generates.

    Returns:
        AlgebraComparison: isomorphic, distinguished with a witness, or
        undetermined when the search is exhausted or exceeds the bound
    """
    bound = settings.iso_search_bound if bound is None else bound
    n = min(P1.truncation, P2.truncation)
    B1 = build_algebra(P1.with_truncation(n))
    B2 = build_algebra(P2.with_truncation(n))
    if len(B1.vertices) != len(B2.vertices):
        return AlgebraComparison(DISTINGUISHED, n, f"{len(B1.vertices)} vertices against {len(B2.vertices)}")
    for d in range(n + 1):
        if B1.dim(d) != B2.dim(d):
            return AlgebraComparison(DISTINGUISHED, n, f"dimension in degree {d} is {B1.dim(d)} against {B2.dim(d)}")
    if factorial(len(B1.vertices)) > bound:
        return AlgebraComparison(UNDETERMINED, n, "too many vertex bijections to search")
    bijections = []
    for image in permutations(B2.vertices):
        pi = dict(zip(B1.vertices, image))
        if all(len(B1.block(d, s, t)) == len(B2.block(d, pi[s], pi[t]))
               for d in range(n + 1) for s in B1.vertices for t in B1.vertices):
            bijections.append(pi)
    if not bijections:
        return AlgebraComparison(DISTINGUISHED, n, "no vertex bijection matches the graded Cartan matrices")
    budget = bound
    for pi in bijections:
        images, budget = _search(B1, B2, pi, budget)
        if images is not None:
            arrows = {name: " + ".join(f"{linalg.scalar_str(B2.field, c)}*{p}" for p, c in element.items())
                      for name, element in images.items()}
            logger.info("isomorphism found under %s", pi)
            return AlgebraComparison(ISOMORPHIC, n, "", pi, arrows)
        if budget < 0:
            return AlgebraComparison(UNDETERMINED, n, f"search exceeded {bound} candidates")
    if linalg.field_name(B2.field) != "Q" and B2.field.mod <= 3:
        return AlgebraComparison(DISTINGUISHED, n, "no generator correspondence preserves the relations")
    return AlgebraComparison(UNDETERMINED, n, "no correspondence with coefficients 0, 1, -1")


# ============ COMMUTATIVITY ============

@dataclass
class CommutativityReport:
    algebras: Dict[str, DualAlgebra]
    statuses: Dict[str, str]
    comparison: AlgebraComparison


def _step(provenance: str, compute: Callable[[], DualAlgebra]) -> DualAlgebra:
    try:
        return compute()
    except RefusedError as e:
        raise RefusedError(e.detail, provenance=provenance, exit_code=e.exit_code)


def check_commutativity(A: GradedAlgebra, order: StratOrder, depth: int) -> CommutativityReport:
    """
    Compute E(A), R(A), R(E(A)) and E(R(A)) and compare the last two.

    Raises:
        RefusedError: A is not balanced, or any step refuses; the provenance
            names the step
    """
    _require_rung(A, order, "balanced", "A")
    E = _step("E(A)", lambda: koszul_dual(A, order, depth))
    R = _step("R(A)", lambda: ringel_dual(A, order))
    EA, RA = E.algebra(), R.algebra()
    statuses = {"A": "balanced"}
    for name, B, dual in (("E(A)", EA, E), ("R(A)", RA, R)):
        statuses[name] = _require_rung(B, dual.order, "balanced", name).status
    RE = _step("R(E(A))", lambda: ringel_dual(EA, E.order))
    ER = _step("E(R(A))", lambda: koszul_dual(RA, R.order, depth))
    comparison = compare_algebras(RE.presentation, ER.presentation)
    logger.info("R(E(A)) against E(R(A)): %s", comparison.verdict)
    return CommutativityReport({"E(A)": E, "R(A)": R, "R(E(A))": RE, "E(R(A))": ER}, statuses, comparison)


def quotient_classification(A: GradedAlgebra, order: StratOrder) -> Optional[Classification]:
    """Classify the quotient by the largest class; None when that class is everything."""
    if len(order.classes) < 2:
        return None
    top = order.classes[-1]
    B = quotient_by_class(A, order, top)
    return classify(B, order.without(top))
