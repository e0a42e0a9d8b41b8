import random
from fractions import Fraction

import pytest
from sympy import GF, QQ

from app.engine import linalg
from app.exceptions import PresentationError, UsageError


def test_field_names():
    """Test resolving field names"""
    assert linalg.field_from_name("Q") == QQ
    assert linalg.field_from_name("GF(5)") == GF(5)
    assert linalg.field_from_name("GF:7") == GF(7)
    assert linalg.field_name(GF(3)) == "GF(3)"


def test_composite_modulus_rejected():
    """Test that GF(n) needs a prime"""
    with pytest.raises(PresentationError) as exc:
        linalg.field_from_name("GF(4)")
    assert "not prime" in exc.value.detail


def test_scalar_in_prime_field():
    """Test that 1/2 is 2 in GF(3)"""
    K = GF(3)
    assert linalg.scalar(K, Fraction(1, 2)) == K(2)
    assert linalg.scalar(QQ, "3/4") == QQ(3, 4)


def test_scalar_without_value():
    """Test that 1/3 has no value in GF(3)"""
    with pytest.raises(PresentationError):
        linalg.scalar(GF(3), Fraction(1, 3))


def test_combine_drops_zeros():
    """Test linear combinations stay sparse"""
    K = QQ
    v = linalg.combine(K, [(K.one, {0: K(1), 1: K(2)}), (K(-1), {0: K(1)})])
    assert v == {1: K(2)}


def test_rank_and_kernel():
    """Test rank and kernel of a rank-one matrix"""
    K = QQ
    M = linalg.from_rows([{0: K(1), 1: K(2)}, {0: K(2), 1: K(4)}], 2, K)
    rank, kernel = linalg.rank_kernel(M)
    assert rank == 1
    assert len(kernel) == 1
    assert linalg.apply(M, kernel[0]) == {}


def test_solve_consistent_and_inconsistent():
    """Test exact solving"""
    K = QQ
    M = linalg.from_rows([{0: K(1), 1: K(1)}, {1: K(1)}], 2, K)
    particular, kernel = linalg.solve(M, {0: K(3), 1: K(1)})
    assert particular == {0: K(2), 1: K(1)}
    assert kernel == []
    singular = linalg.from_rows([{0: K(1)}, {0: K(2)}], 1, K)
    assert linalg.solve(singular, {0: K(1), 1: K(1)}) is None


def test_solve_rejects_wrong_size():
    """Test a right-hand side outside the rows"""
    K = QQ
    with pytest.raises(UsageError):
        linalg.solve(linalg.identity(2, K), {5: K(1)})


def test_matmul_shape_mismatch():
    """Test composing incompatible matrices"""
    K = QQ
    with pytest.raises(UsageError):
        linalg.matmul(linalg.zeros(2, 3, K), linalg.zeros(2, 3, K))


def test_subspace_membership_and_intersection():
    """Test spans, sums and intersections"""
    K = QQ
    U = linalg.span([{0: K(1)}, {1: K(1)}], 3, K)
    V = linalg.span([{1: K(1)}, {2: K(1)}], 3, K)
    assert U.dim == 2
    assert U.contains(K, {0: K(5), 1: K(-1)})
    assert not U.contains(K, {2: K(1)})
    assert linalg.intersect(U, V, K).dim == 1
    assert linalg.sum_subspaces(U, V, K).dim == 3
    assert U.complement_indices() == [2]


def test_quotient_basis():
    """Test projection onto a quotient kills the subspace"""
    K = QQ
    projection, section = linalg.quotient_basis([{0: K(1), 1: K(1)}], 2, K)
    assert projection.shape == (1, 2)
    assert linalg.apply(projection, {0: K(1), 1: K(1)}) == {}
    assert linalg.apply(linalg.matmul(projection, section), {0: K(1)}) == {0: K(1)}


def test_inverse():
    """Test inverting an invertible matrix"""
    K = GF(5)
    M = linalg.from_rows([{0: K(2)}, {1: K(3)}], 2, K)
    inv = linalg.inverse(M)
    assert linalg.matmul(M, inv) == linalg.identity(2, K)


@pytest.mark.parametrize("seed", range(5))
def test_rank_plus_nullity_over_prime_field(seed):
    """Test rank and kernel size add up to the column count over GF(5)"""
    K = GF(5)
    rng = random.Random(seed)
    for _ in range(20):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        rows = [{c: K(rng.randrange(5)) for c in range(ncols)} for _ in range(nrows)]
        M = linalg.from_rows(rows, ncols, K)
        rank, kernel = linalg.rank_kernel(M)
        assert rank + len(kernel) == ncols
        assert rank == linalg.rank(M)
        assert all(linalg.apply(M, v) == {} for v in kernel)
