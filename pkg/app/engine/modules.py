"""
Graded modules over a truncated algebra.

A module is a quiver representation restricted to a window of degrees
``[lo, hi]``. Its vector spaces are the blocks ``e_v M_j`` keyed by
``(j, v)``; an arrow ``a: s -> t`` of degree d acts by a matrix from block
``(j, s)`` to block ``(j + d, t)``. Each window end is either exact (the
module vanishes beyond it) or cut (unknown beyond it).
"""
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.matrices.sdm import SDM

from app.engine import linalg
from app.engine.algebra import Element, GradedAlgebra, Path, opposite
from app.engine.linalg import Subspace, Vector
from app.exceptions import UsageError

logger = logging.getLogger(__name__)

Block = Tuple[int, str]


# ============ MODULES ============

@dataclass(frozen=True, eq=False)
class GradedModule:
    algebra: GradedAlgebra
    lo: int
    hi: int
    dims: Dict[Block, int]
    actions: Dict[Tuple[str, int], SDM]
    lo_exact: bool = True
    hi_exact: bool = False
    label: str = ""

    @property
    def field(self):
        return self.algebra.field

    def dim(self, j: int, v: str) -> int:
        return self.dims.get((j, v), 0)

    def known_dim(self, j: int, v: str) -> Optional[int]:
        """Dimension of e_v M_j, or None when the block lies beyond a cut end."""
        if self.lo <= j <= self.hi:
            return self.dims.get((j, v), 0)
        if j < self.lo:
            return 0 if self.lo_exact else None
        return 0 if self.hi_exact else None

    def degree_dim(self, j: int) -> int:
        return sum(n for (d, _), n in self.dims.items() if d == j)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def blocks(self) -> List[Block]:
        order = {v: i for i, v in enumerate(self.algebra.vertices)}
        return sorted((b for b, n in self.dims.items() if n), key=lambda b: (b[0], order[b[1]]))

    def action(self, arrow: str, j: int) -> SDM:
        a = self.algebra.arrows[arrow]
        mat = self.actions.get((arrow, j))
        if mat is not None:
            return mat
        return linalg.zeros(self.dim(j + a.degree, a.target), self.dim(j, a.source), self.field)

    def action_known(self, arrow: str, j: int) -> bool:
        a = self.algebra.arrows[arrow]
        src = self.known_dim(j, a.source)
        tgt = self.known_dim(j + a.degree, a.target)
        return src == 0 or tgt == 0 or (src is not None and tgt is not None)

    def act_path(self, path: Path, j: int, vector: Vector) -> Optional[Vector]:
        """Apply a path to an element of block (j, path.source); None if it leaves the window."""
        current = vector
        degree = j
        for name in path.arrows:
            if not current:
                return {}
            a = self.algebra.arrows[name]
            if self.known_dim(degree + a.degree, a.target) is None:
                return None
            current = linalg.apply(self.action(name, degree), current)
            degree += a.degree
        return current

    def act_element(self, element: Element, j: int, vector: Vector) -> Optional[Vector]:
        """Apply a homogeneous algebra element to a homogeneous element of M."""
        K = self.field
        terms = []
        for path, c in element.items():
            image = self.act_path(path, j, vector)
            if image is None:
                return None
            terms.append((c, image))
        return linalg.combine(K, terms)

    def dimension_vector(self) -> Dict[str, List[int]]:
        return {v: [self.dim(j, v) for j in self.degrees()] for v in self.algebra.vertices}

    def graded_dims(self) -> List[int]:
        return [self.degree_dim(j) for j in self.degrees()]

    def relabel(self, label: str) -> "GradedModule":
        return replace(self, label=label)

    def check_relations(self) -> List[str]:
        """Relations of the algebra that fail to act as zero inside the window."""
        A = self.algebra
        K = self.field
        failures = []
        for r in A.presentation.relations:
            word0 = r.terms[0][1]
            s = A.arrows[word0[0]].source
            for j in self.degrees():
                n = self.dim(j, s)
                for k in range(n):
                    terms = []
                    for c, word in r.terms:
                        image = self.act_path(Path(s, A.arrows[word[-1]].target, tuple(word)), j, {k: K.one})
                        if image is None:
                            terms = None
                            break
                        terms.append((linalg.scalar(K, c), image))
                    if terms is not None and linalg.combine(K, terms):
                        failures.append(f"relation fails in degree {j}")
                        break
        return failures


# ============ MAPS ============

@dataclass(frozen=True, eq=False)
class ModuleMap:
    """A degree-zero homomorphism given blockwise."""

    source: GradedModule
    target: GradedModule
    blocks: Dict[Block, SDM]

    def block(self, b: Block) -> SDM:
        mat = self.blocks.get(b)
        if mat is not None:
            return mat
        return linalg.zeros(self.target.dim(*b), self.source.dim(*b), self.source.field)

    def apply(self, b: Block, vector: Vector) -> Vector:
        return linalg.apply(self.block(b), vector)

    def is_zero(self) -> bool:
        return all(linalg.is_zero(m) for m in self.blocks.values())

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        blocks = {}
        for b in other.source.blocks():
            if self.target.dim(*b):
                blocks[b] = linalg.matmul(self.block(b), other.block(b))
        return ModuleMap(other.source, self.target, blocks)

    def commutes(self) -> bool:
        """Homogeneity check on every degree where both sides are known."""
        M, N = self.source, self.target
        for a in M.algebra.arrow_list:
            for j in M.degrees():
                if not M.dim(j, a.source):
                    continue
                if not (M.action_known(a.name, j) and N.action_known(a.name, j)):
                    continue
                if not (N.lo <= j + a.degree <= N.hi and M.lo <= j + a.degree <= M.hi):
                    continue
                left = linalg.matmul(N.action(a.name, j), self.block((j, a.source)))
                right = linalg.matmul(self.block((j + a.degree, a.target)), M.action(a.name, j))
                if not linalg.is_zero(left - right):
                    return False
        return True


def identity_map(M: GradedModule) -> ModuleMap:
    return ModuleMap(M, M, {b: linalg.identity(n, M.field) for b, n in M.dims.items() if n})


def zero_map(M: GradedModule, N: GradedModule) -> ModuleMap:
    return ModuleMap(M, N, {})


def combine_maps(M: GradedModule, N: GradedModule, terms: Iterable[Tuple[object, ModuleMap]]) -> ModuleMap:
    """Linear combination of maps M -> N."""
    K = M.field
    blocks: Dict[Block, SDM] = {}
    for c, f in terms:
        if not c:
            continue
        for b, mat in f.blocks.items():
            if not (M.dim(*b) and N.dim(*b)):
                continue
            scaled = mat * c if c != K.one else mat
            blocks[b] = blocks[b] + scaled if b in blocks else scaled
    return ModuleMap(M, N, blocks)


def shift_map(f: ModuleMap, i: int) -> ModuleMap:
    """f<i> between the shifted modules."""
    blocks = {(j - i, v): mat for (j, v), mat in f.blocks.items()}
    return ModuleMap(shift(f.source, i), shift(f.target, i), blocks)


def map_layout(M: GradedModule, N: GradedModule) -> Tuple[Dict[Block, int], int]:
    """Offsets of the blocks of a map M -> N flattened row by row, and the total length."""
    layout: Dict[Block, int] = {}
    offset = 0
    for b in M.blocks():
        n = N.dim(*b)
        if n:
            layout[b] = offset
            offset += n * M.dim(*b)
    return layout, offset


def flatten_map(f: ModuleMap, layout: Dict[Block, int]) -> Vector:
    vec: Dict[int, object] = {}
    for b, base in layout.items():
        cols = f.source.dim(*b)
        for r, row in f.block(b).items():
            for c, x in row.items():
                vec[base + r * cols + c] = x
    return linalg.clean(vec)


def zero_module(A: GradedAlgebra, lo: int = 0, label: str = "0") -> GradedModule:
    return GradedModule(A, lo, lo - 1, {}, {}, True, True, label)


# ============ CANONICAL MODULES ============

@lru_cache(maxsize=256)
def projective(A: GradedAlgebra, lam: str, shift_by: int = 0) -> GradedModule:
    """
    P(lam)<shift_by>: standard paths starting at lam, arrows acting by appending.

    The unshifted module lives in degrees [0, N]; the top end is exact when
    the algebra vanishes beyond a full band of degrees.
    """
    if lam not in A.vertices:
        raise UsageError(f"unknown vertex '{lam}'")
    K = A.field
    dims: Dict[Block, int] = {}
    index: Dict[Block, Dict[Path, int]] = {}
    for d in range(A.N + 1):
        for mu in A.vertices:
            paths = A.block(d, lam, mu)
            if paths:
                dims[(d, mu)] = len(paths)
                index[(d, mu)] = {p: i for i, p in enumerate(paths)}
    actions: Dict[Tuple[str, int], SDM] = {}
    for (d, mu), paths in index.items():
        for a in A.arrow_list:
            if a.source != mu or d + a.degree > A.N:
                continue
            tgt = index.get((d + a.degree, a.target))
            if tgt is None:
                continue
            rows: Dict[int, Dict[int, object]] = {}
            for p, col in paths.items():
                image = A.normal_form(A.concat(p, Path(mu, a.target, (a.name,))))
                for q, c in image.items():
                    rows.setdefault(tgt[q], {})[col] = c
            actions[(a.name, d)] = linalg.matrix(rows, (len(tgt), len(paths)), K)
    M = GradedModule(A, 0, A.N, dims, actions, True, False, f"P({lam})")
    M = seal(M, 0)
    return shift(M, shift_by) if shift_by else M


def simple(A: GradedAlgebra, lam: str, shift_by: int = 0) -> GradedModule:
    if lam not in A.vertices:
        raise UsageError(f"unknown vertex '{lam}'")
    M = GradedModule(A, 0, 0, {(0, lam): 1}, {}, True, True, f"L({lam})")
    return shift(M, shift_by) if shift_by else M


def injective(A: GradedAlgebra, lam: str, shift_by: int = 0) -> GradedModule:
    """I(lam) as the graded dual of the projective of the opposite algebra."""
    I = graded_dual(projective(opposite(A), lam), target_algebra=A).relabel(f"I({lam})")
    return shift(I, shift_by) if shift_by else I


def canonical_module(A: GradedAlgebra, kind: str, lam: str) -> GradedModule:
    """
    Construct P, L or I at a vertex.

    Raises:
        UsageError: unknown kind or vertex
    """
    builders = {"projective": projective, "simple": simple, "injective": injective}
    if kind not in builders:
        raise UsageError(f"unknown module kind '{kind}'")
    return builders[kind](A, lam)


# ============ WINDOWS ============

def shift(M: GradedModule, i: int) -> GradedModule:
    """M<i> with (M<i>)_j = M_{i+j}."""
    if i == 0:
        return M
    dims = {(j - i, v): n for (j, v), n in M.dims.items()}
    actions = {(a, j - i): mat for (a, j), mat in M.actions.items()}
    return GradedModule(M.algebra, M.lo - i, M.hi - i, dims, actions, M.lo_exact, M.hi_exact,
                        shift_label(M.label, i))


def shift_label(label: str, i: int) -> str:
    if not label or i == 0:
        return label
    base, current = label, 0
    if label.endswith(">") and "<" in label:
        head, _, tail = label.rpartition("<")
        try:
            current = int(tail[:-1])
            base = head
        except ValueError:
            pass
    total = current + i
    return base if total == 0 else f"{base}<{total}>"


def restrict(M: GradedModule, lo: int, hi: int) -> GradedModule:
    """Restrict to [lo, hi] inside the current window; ends that lose data become cut."""
    lo2, hi2 = max(lo, M.lo), min(hi, M.hi)
    dims = {b: n for b, n in M.dims.items() if lo2 <= b[0] <= hi2 and n}
    actions = {}
    for (name, j), mat in M.actions.items():
        a = M.algebra.arrows[name]
        if lo2 <= j and j + a.degree <= hi2:
            actions[(name, j)] = mat
    lost_top = any(b[0] > hi2 for b, n in M.dims.items() if n)
    lost_bottom = any(b[0] < lo2 for b, n in M.dims.items() if n)
    hi_exact = M.hi_exact and not lost_top
    lo_exact = M.lo_exact and not lost_bottom
    return GradedModule(M.algebra, lo2, hi2, dims, actions, lo_exact, hi_exact, M.label)


def pad(M: GradedModule, lo: int, hi: int) -> GradedModule:
    """Widen the window over exact ends (the new degrees are zero)."""
    new_lo = min(lo, M.lo) if M.lo_exact else M.lo
    new_hi = max(hi, M.hi) if M.hi_exact else M.hi
    return replace(M, lo=new_lo, hi=new_hi)


def seal(M: GradedModule, generated_upto: int) -> GradedModule:
    """
    Mark the top end exact when a band of zero degrees sits above all generators.

    Every element above the generators is a sum of arrow images from the
    previous max_degree degrees, so such a band forces zero beyond it.
    """
    if M.hi_exact:
        return trim(M)
    width = M.algebra.max_degree
    zero_run = 0
    for j in range(max(M.lo, generated_upto + 1), M.hi + 1):
        zero_run = zero_run + 1 if M.degree_dim(j) == 0 else 0
        if zero_run >= width:
            return trim(replace(M, hi_exact=True))
    return M


def trim(M: GradedModule) -> GradedModule:
    """Shrink exact ends to the occupied degrees."""
    occupied = [j for (j, _), n in M.dims.items() if n]
    lo, hi = M.lo, M.hi
    if M.hi_exact:
        hi = max(occupied) if occupied else (lo - 1 if M.lo_exact else hi)
    if M.lo_exact:
        lo = min(occupied) if occupied else hi + 1
    if lo > hi + 1:
        lo = hi + 1
    return replace(M, lo=lo, hi=hi)


def common_window(modules: Sequence[GradedModule]) -> Tuple[int, int]:
    cut_los = [M.lo for M in modules if not M.lo_exact]
    cut_his = [M.hi for M in modules if not M.hi_exact]
    lo = max(cut_los) if cut_los else min(M.lo for M in modules)
    hi = min(cut_his) if cut_his else max(M.hi for M in modules)
    return lo, hi


def direct_sum(modules: Sequence[GradedModule], label: Optional[str] = None) -> Tuple[GradedModule, List[Dict[Block, int]]]:
    """
    Direct sum on the common window.

    Returns:
        (sum, offsets) where offsets[k][block] is where summand k starts
    """
    if not modules:
        raise UsageError("direct sum of nothing")
    A = modules[0].algebra
    K = A.field
    lo, hi = common_window(modules)
    parts = [restrict(pad(M, lo, hi), lo, hi) for M in modules]
    dims: Dict[Block, int] = {}
    offsets: List[Dict[Block, int]] = []
    for M in parts:
        off = {}
        for b, n in M.dims.items():
            if n:
                off[b] = dims.get(b, 0)
                dims[b] = dims.get(b, 0) + n
        offsets.append(off)
    actions: Dict[Tuple[str, int], SDM] = {}
    for a in A.arrow_list:
        for j in range(lo, hi + 1):
            src, tgt = (j, a.source), (j + a.degree, a.target)
            if not dims.get(src) or not dims.get(tgt) or j + a.degree > hi:
                continue
            rows: Dict[int, Dict[int, object]] = {}
            for M, off in zip(parts, offsets):
                if src not in off or tgt not in off:
                    continue
                for i, row in M.action(a.name, j).items():
                    target_row = rows.setdefault(i + off[tgt], {})
                    for c, x in row.items():
                        target_row[c + off[src]] = x
            actions[(a.name, j)] = linalg.matrix(rows, (dims[tgt], dims[src]), K)
    lo_exact = all(M.lo_exact for M in parts)
    hi_exact = all(M.hi_exact for M in parts)
    name = label if label is not None else " + ".join(M.label for M in modules)
    return GradedModule(A, lo, hi, dims, actions, lo_exact, hi_exact, name), offsets


def graded_dual(M: GradedModule, target_algebra: Optional[GradedAlgebra] = None) -> GradedModule:
    """
    The graded dual, a module over the opposite algebra.

    Degree j of the dual is the dual of M_{-j}; arrows act by transposes and
    the exactness of the window ends is swapped.
    """
    A_op = target_algebra if target_algebra is not None else opposite(M.algebra)
    dims = {(-j, v): n for (j, v), n in M.dims.items() if n}
    actions = {}
    for (name, j), mat in M.actions.items():
        d = M.algebra.arrows[name].degree
        actions[(name, -j - d)] = mat.transpose()
    label = f"D{M.label}" if M.label else ""
    return GradedModule(A_op, -M.hi, -M.lo, dims, actions, M.hi_exact, M.lo_exact, label)


# ============ SUBMODULES ============

@dataclass(frozen=True, eq=False)
class Submodule:
    ambient: GradedModule
    spaces: Dict[Block, Subspace] = field(default_factory=dict)

    def dim(self, b: Block) -> int:
        s = self.spaces.get(b)
        return s.dim if s is not None else 0

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())

    def contains(self, b: Block, vector: Vector) -> bool:
        if not vector:
            return True
        s = self.spaces.get(b)
        return s is not None and s.contains(self.ambient.field, vector)

    def equals(self, other: "Submodule") -> bool:
        K = self.ambient.field
        keys = set(self.spaces) | set(other.spaces)
        for b in keys:
            if self.dim(b) != other.dim(b):
                return False
            if self.dim(b) and not all(other.contains(b, v) for v in self.spaces[b].basis()):
                return False
        return True


def generate(M: GradedModule, elements: Iterable[Tuple[Block, Vector]]) -> Submodule:
    """
    The submodule generated by homogeneous elements.

    Degrees are closed in ascending order; arrows raise degree, so one pass
    suffices.
    """
    K = M.field
    A = M.algebra
    pending: Dict[Block, List[Vector]] = {}
    for b, v in elements:
        v = linalg.clean(v)
        if v and M.dim(*b):
            pending.setdefault(b, []).append(v)
    spaces: Dict[Block, Subspace] = {}
    for j in M.degrees():
        for v in A.vertices:
            b = (j, v)
            if b not in pending:
                continue
            sub = linalg.span(pending.pop(b), M.dim(j, v), K)
            if not sub.dim:
                continue
            spaces[b] = sub
            for a in A.arrow_list:
                if a.source != v or j + a.degree > M.hi:
                    continue
                tb = (j + a.degree, a.target)
                if not M.dim(*tb):
                    continue
                mat = M.action(a.name, j)
                for vec in sub.basis():
                    image = linalg.apply(mat, vec)
                    if image:
                        pending.setdefault(tb, []).append(image)
    return Submodule(M, spaces)


def whole(M: GradedModule) -> Submodule:
    K = M.field
    return Submodule(M, {b: linalg.full_subspace(n, K) for b, n in M.dims.items() if n})


def sum_submodules(S: Submodule, T: Submodule) -> Submodule:
    K = S.ambient.field
    spaces = dict(S.spaces)
    for b, sp in T.spaces.items():
        spaces[b] = linalg.sum_subspaces(spaces[b], sp, K) if b in spaces else sp
    return Submodule(S.ambient, spaces)


def as_module(S: Submodule, label: str = "") -> Tuple[GradedModule, ModuleMap]:
    """The submodule as a module in its own right, with the inclusion."""
    M = S.ambient
    K = M.field
    A = M.algebra
    dims = {b: sp.dim for b, sp in S.spaces.items() if sp.dim}
    actions = {}
    for (j, v), sp in S.spaces.items():
        for a in A.arrow_list:
            if a.source != v:
                continue
            tb = (j + a.degree, a.target)
            if tb not in dims or j + a.degree > M.hi:
                continue
            mat = M.action(a.name, j)
            target_space = S.spaces[tb]
            cols = [target_space.coordinates(linalg.apply(mat, vec)) for vec in sp.basis()]
            actions[(a.name, j)] = linalg.from_columns(cols, dims[tb], K)
    inclusion_blocks = {b: linalg.from_columns(S.spaces[b].basis(), M.dim(*b), K) for b in dims}
    sub = GradedModule(A, M.lo, M.hi, dims, actions, M.lo_exact, M.hi_exact, label)
    return sub, ModuleMap(sub, M, inclusion_blocks)


def quotient_module(M: GradedModule, S: Submodule, label: str = "") -> Tuple[GradedModule, ModuleMap]:
    """M/S with the projection."""
    K = M.field
    A = M.algebra
    proj: Dict[Block, SDM] = {}
    sect: Dict[Block, SDM] = {}
    dims: Dict[Block, int] = {}
    for b, n in M.dims.items():
        if not n:
            continue
        sp = S.spaces.get(b)
        basis = sp.basis() if sp is not None else []
        p, s = linalg.quotient_basis(basis, n, K)
        proj[b], sect[b] = p, s
        if p.shape[0]:
            dims[b] = p.shape[0]
    actions = {}
    for (name, j), mat in M.actions.items():
        a = A.arrows[name]
        src, tgt = (j, a.source), (j + a.degree, a.target)
        if src in dims and tgt in dims:
            actions[(name, j)] = linalg.matmul(linalg.matmul(proj[tgt], mat), sect[src])
    Q = GradedModule(A, M.lo, M.hi, dims, actions, M.lo_exact, M.hi_exact, label)
    projection = ModuleMap(M, Q, {b: proj[b] for b in dims})
    return Q, projection


def kernel(f: ModuleMap) -> Submodule:
    K = f.source.field
    spaces = {}
    for b, n in f.source.dims.items():
        if not n:
            continue
        _, vecs = linalg.rank_kernel(f.block(b))
        if vecs:
            spaces[b] = linalg.span(vecs, n, K)
    return Submodule(f.source, spaces)


def image(f: ModuleMap) -> Submodule:
    K = f.target.field
    spaces = {}
    for b, n in f.target.dims.items():
        if not n or not f.source.dim(*b):
            continue
        sp = linalg.span(linalg.columns(f.block(b)), n, K)
        if sp.dim:
            spaces[b] = sp
    return Submodule(f.target, spaces)


def trace_submodule(M: GradedModule, generators: Iterable[Tuple[str, int]]) -> Submodule:
    """
    Trace of the projectives P(mu)<-j> for the listed (mu, j).

    A map P(mu)<-j> -> M is an element of e_mu M_j, so the trace is the
    submodule generated by those blocks.
    """
    K = M.field
    elements = []
    for mu, j in generators:
        n = M.dim(j, mu)
        elements.extend(((j, mu), {k: K.one}) for k in range(n))
    return generate(M, elements)


def trace_of_vertices(M: GradedModule, vertices: Iterable[str], above: Optional[int] = None) -> Submodule:
    """Trace of all shifts of P(mu) for mu in vertices; optionally only degrees > above."""
    vertices = set(vertices)
    gens = [(v, j) for (j, v), n in M.dims.items()
            if n and v in vertices and (above is None or j > above)]
    return trace_submodule(M, gens)


# ============ STRUCTURE ============

@dataclass(frozen=True, eq=False)
class StructureParts:
    radical: Submodule
    top: GradedModule
    top_projection: ModuleMap
    socle: Submodule
    socle_truncated: bool


def radical(M: GradedModule) -> Submodule:
    elements = []
    for (name, j), mat in M.actions.items():
        a = M.algebra.arrows[name]
        for vec in linalg.columns(mat):
            if vec:
                elements.append(((j + a.degree, a.target), vec))
    return generate(M, elements)


def socle(M: GradedModule) -> Tuple[Submodule, bool]:
    """Common kernel of all arrows; blocks whose arrows leave a cut window are skipped."""
    K = M.field
    A = M.algebra
    spaces = {}
    truncated = False
    for (j, v), n in M.dims.items():
        if not n:
            continue
        outgoing = [a for a in A.arrow_list if a.source == v]
        if any(not M.action_known(a.name, j) for a in outgoing):
            truncated = True
            continue
        mats = [M.action(a.name, j) for a in outgoing if M.known_dim(j + a.degree, a.target)]
        if mats:
            stacked = mats[0]
            for m in mats[1:]:
                stacked = stacked.vstack(m)
            _, vecs = linalg.rank_kernel(stacked)
        else:
            vecs = [{k: K.one} for k in range(n)]
        if vecs:
            spaces[(j, v)] = linalg.span(vecs, n, K)
    return Submodule(M, spaces), truncated


def structure_parts(M: GradedModule) -> StructureParts:
    rad = radical(M)
    top, proj = quotient_module(M, rad, label=f"top {M.label}".strip())
    soc, truncated = socle(M)
    if truncated:
        logger.debug("socle of %s truncated at degree %s", M.label, M.hi)
    return StructureParts(rad, top, proj, soc, truncated)


def top_generators(M: GradedModule) -> List[Tuple[Block, Vector]]:
    """Lifts of a basis of the top, in degree then vertex order."""
    rad = radical(M)
    K = M.field
    gens = []
    for b in M.blocks():
        sp = rad.spaces.get(b)
        free = sp.complement_indices() if sp is not None else list(range(M.dim(*b)))
        gens.extend((b, {c: K.one}) for c in free)
    return gens


def composition_multiplicity(M: GradedModule, lam: str, j: int) -> int:
    return M.dim(j, lam)


# ============ HOM ============

@dataclass(frozen=True, eq=False)
class HomSpace:
    source: GradedModule
    target: GradedModule
    basis: List[ModuleMap]
    exact: bool

    @property
    def dim(self) -> int:
        return len(self.basis)


def hom_space(M: GradedModule, N: GradedModule) -> HomSpace:
    """
    Degree-zero homomorphisms M -> N.

    Unknowns are the blocks where both modules are nonzero; each arrow gives
    the commutation equations. Equations that would need data beyond a cut
    end are dropped and the result is flagged inexact.
    """
    A = M.algebra
    K = M.field
    variables: Dict[Block, int] = {}
    offset = 0
    for b in M.blocks():
        n = N.known_dim(*b)
        if n:
            variables[b] = offset
            offset += n * M.dim(*b)
    exact = True
    equations: List[Vector] = []
    degrees = set(j for j, _ in M.dims) | set(j for j, _ in N.dims)
    for a in A.arrow_list:
        for j in sorted(degrees | set(j - a.degree for j in degrees)):
            src, tgt = (j, a.source), (j + a.degree, a.target)
            m_src = M.known_dim(*src)
            n_tgt = N.known_dim(*tgt)
            if m_src == 0 or n_tgt == 0:
                continue
            f1 = src in variables
            f2 = tgt in variables
            if m_src is None or n_tgt is None:
                exact = exact and not (f1 or f2)
                continue
            f1_unknown = N.known_dim(*src) is None
            f2_unknown = M.known_dim(*tgt) is None
            if f1_unknown or f2_unknown:
                exact = exact and not (f1 or f2)
                continue
            if not f1 and not f2:
                continue
            m_tgt = M.dim(*tgt)
            n_act = N.action(a.name, j) if f1 else None
            m_act = M.action(a.name, j) if f2 else None
            n_cols = {}
            if f1:
                for r, row in n_act.items():
                    n_cols[r] = row
            m_by_col: Dict[int, Dict[int, object]] = {}
            if f2:
                for k, row in m_act.items():
                    for c, x in row.items():
                        m_by_col.setdefault(c, {})[k] = x
            for r in range(n_tgt):
                for c in range(m_src):
                    eq: Dict[int, object] = {}
                    if f1:
                        base = variables[src]
                        for k, x in n_cols.get(r, {}).items():
                            idx = base + k * m_src + c
                            eq[idx] = eq.get(idx, K.zero) + x
                    if f2:
                        base = variables[tgt]
                        for k, x in m_by_col.get(c, {}).items():
                            idx = base + r * m_tgt + k
                            eq[idx] = eq.get(idx, K.zero) - x
                    eq = linalg.clean(eq)
                    if eq:
                        equations.append(eq)
    _, solutions = linalg.rank_kernel(linalg.from_rows(equations, offset, K))
    basis = []
    for sol in solutions:
        blocks = {}
        for b, base in variables.items():
            rows_n, cols_m = N.dim(*b), M.dim(*b)
            data: Dict[int, Dict[int, object]] = {}
            for r in range(rows_n):
                for c in range(cols_m):
                    x = sol.get(base + r * cols_m + c)
                    if x:
                        data.setdefault(r, {})[c] = x
            blocks[b] = linalg.matrix(data, (rows_n, cols_m), K)
        basis.append(ModuleMap(M, N, blocks))
    return HomSpace(M, N, basis, exact)


def hom_dim(M: GradedModule, N: GradedModule) -> int:
    return hom_space(M, N).dim


def is_isomorphism(f: ModuleMap) -> bool:
    M, N = f.source, f.target
    if set(b for b, n in M.dims.items() if n) != set(b for b, n in N.dims.items() if n):
        return False
    return all(linalg.rank(f.block(b)) == n for b, n in M.dims.items() if n)


# ============ FREE MODULES ============

@dataclass(frozen=True, eq=False)
class FreeModule:
    """
    A direct sum of shifted projectives P(v)<-g>, one per generator (v, g).

    The basis of block (j, w) is the list of pairs (generator index, standard
    path from v to w of degree j - g).
    """

    module: GradedModule
    generators: Tuple[Tuple[str, int], ...]
    basis: Dict[Block, List[Tuple[int, Path]]]

    def index(self, b: Block) -> Dict[Tuple[int, Path], int]:
        return {key: i for i, key in enumerate(self.basis.get(b, []))}

    def element(self, b: Block, coefficients: Dict[Tuple[int, Path], object]) -> Vector:
        idx = self.index(b)
        return linalg.clean({idx[k]: c for k, c in coefficients.items()})

    def decompose(self, b: Block, vector: Vector) -> Dict[int, Element]:
        """Split an element into algebra elements, one per generator."""
        out: Dict[int, Element] = {}
        keys = self.basis.get(b, [])
        for i, c in vector.items():
            g, path = keys[i]
            out.setdefault(g, {})[path] = c
        return out

    def map_to(self, N: GradedModule, values: Sequence[Vector]) -> ModuleMap:
        """The homomorphism sending generator k to values[k] (an element of N)."""
        K = N.field
        blocks: Dict[Block, SDM] = {}
        for b, keys in self.basis.items():
            n = N.dim(*b)
            if not n:
                continue
            cols = []
            for g, path in keys:
                v, deg = self.generators[g]
                image = N.act_path(path, deg, values[g])
                cols.append(image or {})
            blocks[b] = linalg.from_columns(cols, n, K)
        return ModuleMap(self.module, N, blocks)


def free_module(A: GradedAlgebra, generators: Sequence[Tuple[str, int]], lo: int, hi: int,
                label: str = "") -> FreeModule:
    """
    Direct sum of P(v)<-g> restricted to [lo, hi].

    Each summand is exact in degrees up to g + N; the window must not exceed
    that horizon for any generator.
    """
    K = A.field
    generators = tuple(generators)
    basis: Dict[Block, List[Tuple[int, Path]]] = {}
    for j in range(lo, hi + 1):
        for w in A.vertices:
            keys = []
            for g, (v, deg) in enumerate(generators):
                d = j - deg
                if 0 <= d <= A.N:
                    keys.extend((g, p) for p in A.block(d, v, w))
            if keys:
                basis[(j, w)] = keys
    dims = {b: len(keys) for b, keys in basis.items()}
    actions: Dict[Tuple[str, int], SDM] = {}
    for (j, w), keys in basis.items():
        for a in A.arrow_list:
            if a.source != w or j + a.degree > hi:
                continue
            tb = (j + a.degree, a.target)
            if tb not in basis:
                continue
            tindex = {key: i for i, key in enumerate(basis[tb])}
            rows: Dict[int, Dict[int, object]] = {}
            for col, (g, p) in enumerate(keys):
                if a.degree + A.degree_of(p) > A.N:
                    continue
                for q, c in A.normal_form(A.concat(p, Path(w, a.target, (a.name,)))).items():
                    rows.setdefault(tindex[(g, q)], {})[col] = c
            actions[(a.name, j)] = linalg.matrix(rows, (len(basis[tb]), len(keys)), K)
    hi_exact = all(projective(A, v).hi_exact and deg + projective(A, v).hi <= hi for v, deg in generators)
    module = GradedModule(A, lo, hi, dims, actions, True, hi_exact, label)
    return FreeModule(module, generators, basis)
