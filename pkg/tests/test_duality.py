from fractions import Fraction

import pytest

from app.dependencies import get_presentation, resolve_job
from app.engine.algebra import AlgebraPresentation, Arrow, Quiver, Relation, opposite_presentation
from app.engine.duality import (
    DISTINGUISHED,
    ISOMORPHIC,
    check_commutativity,
    compare_algebras,
    koszul_dual,
    koszul_structure,
    quotient_classification,
    ringel_dual,
    ringel_image_of_standard,
)
from app.engine.strat import UNDETERMINED
from app.exceptions import RefusedError
from app.parser import parse_input
from tests.conftest import load

DUAL_NUMBERS = "vertex 1\narrow e 1 1\nrelation e*e\ntruncate 6\n"
CUBE_ZERO = "vertex 1\narrow x 1 1\nrelation x*x*x\ntruncate 6\n"


def two_loops(word, field="GF(2)", truncation=2):
    """Two loops x, y at one vertex with a single monomial relation"""
    quiver = Quiver(("1",), (Arrow("x", "1", "1"), Arrow("y", "1", "1")))
    return AlgebraPresentation(quiver, (Relation(((Fraction(1), word),)),), field, truncation)


def test_koszul_structure_of_polynomial_ring(kx):
    """Test ext between simples of k[x] lives in degrees 0 and 1"""
    structure = koszul_structure(kx.algebra, 3)
    assert structure.dims == {(1, "1", "1"): 1}


def test_koszul_dual_of_polynomial_ring(kx):
    """Test E(k[x]) is the dual numbers"""
    E = koszul_dual(kx.algebra, kx.order, kx.depth)
    assert E.name == "E(A)"
    assert E.mismatches == []
    assert E.reliable_degree == 6
    assert [a.name for a in E.presentation.quiver.arrows] == ["e1"]
    assert len(E.presentation.relations) == 1
    B = E.algebra()
    assert [B.dim(d) for d in range(4)] == [1, 1, 0, 0]
    expected = get_presentation(parse_input(DUAL_NUMBERS))
    assert compare_algebras(E.presentation, expected).verdict == ISOMORPHIC


def test_koszul_dual_of_square(exm3):
    """Test E of the commuting square: loops squaring to zero and one reversed arrow"""
    E = koszul_dual(exm3.algebra, exm3.order, exm3.depth)
    assert E.mismatches == []
    assert E.order == exm3.order.opposite()
    B = E.algebra()
    assert [B.dim(d) for d in range(4)] == [2, 3, 1, 0]
    assert B.dim(1, source="2", target="1") == 1
    assert B.dim(1, source="1", target="2") == 0
    assert len(E.presentation.relations) == 3


def test_koszul_dual_refused():
    """Test k[x]/x^3 has a nonlinear resolution"""
    job = resolve_job(parse_input(CUBE_ZERO))
    with pytest.raises(RefusedError) as exc:
        koszul_dual(job.algebra, job.order, 3)
    assert exc.value.exit_code == 1
    assert exc.value.detail.startswith("E(A): ")


def test_ringel_dual_of_square(exm3):
    """Test R of the commuting square is the square again"""
    A = exm3.algebra
    R = ringel_dual(A, exm3.order)
    assert R.mismatches == []
    assert R.reliable_degree == A.N - 3
    assert R.order == exm3.order.opposite()
    assert set(R.generator_maps) == {a.name for a in R.presentation.quiver.arrows}
    comparison = compare_algebras(R.presentation, opposite_presentation(exm3.presentation))
    assert comparison.verdict == ISOMORPHIC
    for lam in A.vertices:
        image = ringel_image_of_standard(A, exm3.order, lam, R)
        assert image.dims_match
        assert image.isomorphic


def test_ringel_dual_refused(exm2):
    """Test R(A) needs an adapted algebra"""
    with pytest.raises(RefusedError) as exc:
        ringel_dual(exm2.algebra, exm2.order)
    assert exc.value.exit_code == 1
    assert exc.value.detail.startswith("R(A): algebra is stratified, not adapted")


def test_commutativity_refused(exm2):
    """Test the square of dualities needs a balanced algebra"""
    with pytest.raises(RefusedError) as exc:
        check_commutativity(exm2.algebra, exm2.order, exm2.depth)
    assert exc.value.detail.startswith("A: ")


def test_compare_with_itself(kx):
    """Test an algebra is isomorphic to itself"""
    comparison = compare_algebras(kx.presentation, kx.presentation)
    assert comparison.verdict == ISOMORPHIC
    assert comparison.vertex_map == {"1": "1"}
    assert comparison.truncation == kx.algebra.N


def test_compare_by_dimensions(kx):
    """Test k[x] against its Koszul dual"""
    E = koszul_dual(kx.algebra, kx.order, kx.depth)
    comparison = compare_algebras(kx.presentation, E.presentation)
    assert comparison.verdict == DISTINGUISHED
    assert comparison.truncation == 6
    assert comparison.witness == "dimension in degree 2 is 1 against 0"


def test_compare_vertex_counts(kx, exm3):
    """Test algebras on different vertex sets"""
    assert compare_algebras(kx.presentation, exm3.presentation).verdict == DISTINGUISHED


def test_compare_swapped_generators():
    """Test xy = 0 and yx = 0 give isomorphic algebras"""
    comparison = compare_algebras(two_loops(("x", "y"), "Q"), two_loops(("y", "x"), "Q"))
    assert comparison.verdict == ISOMORPHIC
    assert set(comparison.arrow_images) == {"x", "y"}


def test_compare_exhausted_over_small_field():
    """Test xy = 0 and xx = 0 share dimensions but are not isomorphic"""
    comparison = compare_algebras(two_loops(("x", "y")), two_loops(("x", "x")))
    assert comparison.verdict == DISTINGUISHED


def test_compare_exhausted_over_rationals():
    """Test an exhausted search over Q stays undetermined"""
    comparison = compare_algebras(two_loops(("x", "y"), "Q"), two_loops(("x", "x"), "Q"))
    assert comparison.verdict == UNDETERMINED


def test_quotient_by_top_class(exm3, kx):
    """Test the quotient of a balanced algebra by its top class"""
    assert quotient_classification(exm3.algebra, exm3.order).status == "balanced"
    assert quotient_classification(kx.algebra, kx.order) is None


def test_dualities_commute_on_square(exm3):
    """Test R(E(A)) and E(R(A)) agree for the commuting square"""
    report = check_commutativity(exm3.algebra, exm3.order, exm3.depth)
    assert report.statuses == {"A": "balanced", "E(A)": "balanced", "R(A)": "balanced"}
    assert set(report.algebras) == {"E(A)", "R(A)", "R(E(A))", "E(R(A))"}
    assert report.comparison.verdict == ISOMORPHIC


def test_ringel_dual_needs_a_positive_degree():
    """Test R(A) is undetermined when only degree 0 is reliable"""
    job = load("exm3", truncation=3)
    with pytest.raises(RefusedError) as exc:
        ringel_dual(job.algebra, job.order)
    assert exc.value.exit_code == 2
    assert exc.value.detail.startswith("R(A): homs between tilting modules are reliable only in degree 0")


def test_double_ringel_dual_has_same_cartan():
    """Test R(R(A)) has the Cartan matrices of the commuting square"""
    job = load("exm3", truncation=10)
    A = job.algebra
    R = ringel_dual(A, job.order)
    RR = ringel_dual(R.algebra(), R.order)
    assert RR.order == job.order
    top = min(RR.reliable_degree, 5)
    assert top >= 1
    assert RR.algebra().cartan_table(top) == A.cartan_table(top)
