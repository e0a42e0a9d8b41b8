"""
Exact sparse linear algebra over QQ and prime fields.

Vectors are sparse dicts ``{index: element}`` that never store zeros. Matrices
are sympy ``SDM`` instances acting on column vectors, so a map V -> W has
shape ``(dim W, dim V)``. Elimination is sympy's sparse reduced row echelon
routine; every other operation is derived from it.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import GF, QQ, isprime
from sympy.polys.matrices.sdm import (
    SDM,
    sdm_irref,
    sdm_nullspace_from_rref,
    sdm_particular_from_rref,
)

from app.exceptions import PresentationError, UsageError

logger = logging.getLogger(__name__)

Vector = Dict[int, object]

_GF_PATTERN = re.compile(r"^GF[(:]\s*(\d+)\s*\)?$")


# ============ FIELDS ============

def field_from_name(name: str):
    """
    Resolve a field name to a sympy domain.

    Args:
        name: "Q", "QQ", "GF(p)" or "GF:p"

    Returns:
        QQ or GF(p)

    Raises:
        PresentationError: unknown field or composite modulus
    """
    text = name.strip()
    if text in ("Q", "QQ"):
        return QQ
    match = _GF_PATTERN.match(text)
    if not match:
        raise PresentationError(f"unknown field '{name}'")
    p = int(match.group(1))
    if not isprime(p):
        raise PresentationError(f"GF({p}) is not a field: {p} is not prime")
    return GF(p)


def field_name(K) -> str:
    if K == QQ:
        return "Q"
    return f"GF({K.mod})"


def scalar(K, value) -> object:
    """Convert an int, Fraction or "a/b" string into an element of K."""
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, Fraction):
        den = K(value.denominator)
        if not den:
            raise PresentationError(f"coefficient {value} has no value in {field_name(K)}")
        return K(value.numerator) / den
    return K(value)


def scalar_str(K, x) -> str:
    return str(K.to_sympy(x))


# ============ VECTORS ============

def clean(vector: Dict[int, object]) -> Vector:
    return {i: x for i, x in vector.items() if x}


def combine(K, terms: Iterable[Tuple[object, Vector]]) -> Vector:
    """Linear combination sum(c * v) as a clean sparse vector."""
    out: Dict[int, object] = {}
    for c, v in terms:
        if not c:
            continue
        for i, x in v.items():
            out[i] = out.get(i, K.zero) + c * x
    return clean(out)


def shift_vector(v: Vector, offset: int) -> Vector:
    return {i + offset: x for i, x in v.items()}


# ============ MATRICES ============

def matrix(rows: Dict[int, Dict[int, object]], shape: Tuple[int, int], K) -> SDM:
    """Build an SDM, dropping zeros and empty rows."""
    data = {}
    for i, row in rows.items():
        row = clean(row)
        if row:
            data[i] = row
    return SDM(data, shape, K)


def zeros(nrows: int, ncols: int, K) -> SDM:
    return SDM({}, (nrows, ncols), K)


def identity(n: int, K) -> SDM:
    return SDM.eye((n, n), K)


def from_columns(columns: Sequence[Vector], nrows: int, K) -> SDM:
    rows: Dict[int, Dict[int, object]] = {}
    for j, col in enumerate(columns):
        for i, x in col.items():
            rows.setdefault(i, {})[j] = x
    return matrix(rows, (nrows, len(columns)), K)


def from_rows(vectors: Sequence[Vector], ncols: int, K) -> SDM:
    return matrix(dict(enumerate(vectors)), (len(vectors), ncols), K)


def columns(M: SDM) -> List[Vector]:
    cols: List[Vector] = [{} for _ in range(M.shape[1])]
    for i, row in M.items():
        for j, x in row.items():
            cols[j][i] = x
    return cols


def apply(M: SDM, v: Vector) -> Vector:
    """Matrix times sparse column vector."""
    K = M.domain
    out = {}
    for i, row in M.items():
        s = K.zero
        for j, x in row.items():
            y = v.get(j)
            if y:
                s += x * y
        if s:
            out[i] = s
    return out


def matmul(A: SDM, B: SDM) -> SDM:
    if A.shape[1] != B.shape[0]:
        raise UsageError(f"cannot compose {A.shape} with {B.shape}")
    return A.matmul(B)


def is_zero(M: SDM) -> bool:
    return not any(M.values())


def block_matrix(blocks: Dict[Tuple[int, int], SDM], row_sizes: Sequence[int],
                 col_sizes: Sequence[int], K) -> SDM:
    """Assemble a matrix from blocks keyed by (block_row, block_col)."""
    row_off = [0]
    for n in row_sizes:
        row_off.append(row_off[-1] + n)
    col_off = [0]
    for n in col_sizes:
        col_off.append(col_off[-1] + n)
    rows: Dict[int, Dict[int, object]] = {}
    for (bi, bj), B in blocks.items():
        for i, row in B.items():
            target = rows.setdefault(i + row_off[bi], {})
            for j, x in row.items():
                target[j + col_off[bj]] = x
    return matrix(rows, (row_off[-1], col_off[-1]), K)


def rref(M: SDM) -> Tuple[List[Vector], List[int], Dict[int, set]]:
    data = {i: row for i, row in M.items() if row}
    if not data:
        return [], [], {}
    reduced, pivots, nonzero_cols = sdm_irref(data)
    return [reduced[i] for i in range(len(pivots))], pivots, nonzero_cols


def rank(M: SDM) -> int:
    return len(rref(M)[1])


def rank_kernel(M: SDM) -> Tuple[int, List[Vector]]:
    """
    Rank and a kernel basis of M.

    Returns:
        (rank, kernel vectors); the kernel vectors are independent, span
        ker(M), and are indexed by the non-pivot columns in ascending order.
    """
    K = M.domain
    ncols = M.shape[1]
    rows, pivots, nonzero_cols = rref(M)
    reduced = dict(enumerate(rows))
    kernel, _ = sdm_nullspace_from_rref(reduced, K.one, ncols, pivots, nonzero_cols)
    return len(pivots), [dict(v) for v in kernel]


def solve(A: SDM, b: Vector) -> Optional[Tuple[Vector, List[Vector]]]:
    """
    Solve A x = b exactly.

    Returns:
        (particular solution, kernel basis), or None when the system is
        inconsistent

    Raises:
        UsageError: b has entries outside the row range of A
    """
    nrows, ncols = A.shape
    if any(i < 0 or i >= nrows for i in b):
        raise UsageError(f"right-hand side does not fit a {nrows}x{ncols} system")
    K = A.domain
    augmented = {i: dict(row) for i, row in A.items() if row}
    for i, x in b.items():
        if x:
            augmented.setdefault(i, {})[ncols] = x
    rows, pivots, nonzero_cols = rref(SDM(augmented, (nrows, ncols + 1), K))
    if pivots and pivots[-1] == ncols:
        return None
    reduced = dict(enumerate(rows))
    particular = sdm_particular_from_rref(reduced, ncols + 1, pivots)
    _, kernel = rank_kernel(A)
    return clean(particular), kernel


def inverse(M: SDM) -> SDM:
    if M.shape[0] != M.shape[1]:
        raise UsageError(f"cannot invert a {M.shape} matrix")
    if M.shape[0] == 0:
        return M
    return M.inv()


# ============ SUBSPACES ============

@dataclass(frozen=True)
class Subspace:
    """
    A subspace kept in reduced row echelon form.

    Row ``i`` has a 1 in column ``pivots[i]`` and zeros in every other pivot
    column, so the coordinates of a member ``v`` are ``v[pivots[i]]``.
    """

    ambient: int
    rows: Tuple[Tuple[Tuple[int, object], ...], ...]
    pivots: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def codim(self) -> int:
        return self.ambient - len(self.pivots)

    def basis(self) -> List[Vector]:
        return [dict(r) for r in self.rows]

    def residual(self, K, v: Vector) -> Vector:
        terms = [(K.one, v)]
        for p, r in zip(self.pivots, self.rows):
            c = v.get(p)
            if c:
                terms.append((-c, dict(r)))
        return combine(K, terms)

    def contains(self, K, v: Vector) -> bool:
        return not self.residual(K, v)

    def coordinates(self, v: Vector) -> Vector:
        return clean({i: v.get(p, 0) for i, p in enumerate(self.pivots)})

    def complement_indices(self) -> List[int]:
        taken = set(self.pivots)
        return [c for c in range(self.ambient) if c not in taken]


def span(vectors: Iterable[Vector], ambient: int, K) -> Subspace:
    vectors = [v for v in (clean(v) for v in vectors) if v]
    rows, pivots, _ = rref(from_rows(vectors, ambient, K))
    return Subspace(ambient, tuple(tuple(sorted(r.items())) for r in rows), tuple(pivots))


def zero_subspace(ambient: int) -> Subspace:
    return Subspace(ambient, (), ())


def full_subspace(ambient: int, K) -> Subspace:
    return span(({i: K.one} for i in range(ambient)), ambient, K)


def sum_subspaces(U: Subspace, V: Subspace, K) -> Subspace:
    return span(U.basis() + V.basis(), U.ambient, K)


def intersect(U: Subspace, V: Subspace, K) -> Subspace:
    """Intersection via the kernel of [U | -V]."""
    bu, bv = U.basis(), V.basis()
    if not bu or not bv:
        return zero_subspace(U.ambient)
    stacked = from_columns(bu + [combine(K, [(-K.one, v)]) for v in bv], U.ambient, K)
    _, kernel = rank_kernel(stacked)
    vectors = [combine(K, [(c.get(i, K.zero), bu[i]) for i in range(len(bu))]) for c in kernel]
    return span(vectors, U.ambient, K)


def quotient_basis(subspace_basis: Sequence[Vector], ambient: int, K) -> Tuple[SDM, SDM]:
    """
    Projection onto and section of the quotient by a subspace.

    The quotient is identified with the non-pivot coordinates of the subspace's
    echelon form.

    Returns:
        (projection of shape (q, ambient), section of shape (ambient, q))
    """
    sub = span(subspace_basis, ambient, K)
    free = sub.complement_indices()
    position = {c: k for k, c in enumerate(free)}
    proj: Dict[int, Dict[int, object]] = {k: {c: K.one} for k, c in enumerate(free)}
    for p, r in zip(sub.pivots, sub.rows):
        for c, x in r:
            if c in position:
                proj[position[c]][p] = -x
    section = {c: {k: K.one} for k, c in enumerate(free)}
    return matrix(proj, (len(free), ambient), K), matrix(section, (ambient, len(free)), K)
