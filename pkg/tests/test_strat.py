import pytest

from app.engine.modules import projective, simple
from app.engine.strat import (
    HOLDS,
    KINDS,
    UNDETERMINED,
    VIOLATED,
    Layer,
    combine_verdicts,
    delta_filtration,
    filtration_multiplicity,
    injective_nabla_multiplicities,
    is_standardly_stratified,
    peel,
    standard_kernel,
    strat_module,
)
from app.engine.tilting import tilting_module
from app.exceptions import RefusedError, UsageError
from tests.conftest import load


def test_combine_verdicts():
    """Test violated beats undetermined beats holds"""
    assert combine_verdicts([HOLDS, UNDETERMINED]) == UNDETERMINED
    assert combine_verdicts([UNDETERMINED, VIOLATED, HOLDS]) == VIOLATED
    assert combine_verdicts([]) == HOLDS


def test_default_order_is_declaration_order():
    """Test a missing order line gives singleton classes in declaration order"""
    job = load("exm3", order=None, order_line=None)
    assert job.order.classes == (("1",), ("2",))


def test_standard_modules_of_square(exm3):
    """Test the four modules of the commuting square"""
    A, order = exm3.algebra, exm3.order
    delta1 = strat_module(A, order, "delta", "1")
    assert delta1.label == "Δ(1)"
    assert all(delta1.dim(j, "1") == 1 and delta1.dim(j, "2") == 0 for j in range(A.N + 1))
    assert strat_module(A, order, "proper_delta", "1").dims == {(0, "1"): 1}
    assert strat_module(A, order, "proper_delta", "2").dims == {(0, "2"): 1}
    assert strat_module(A, order, "delta", "2").dims == projective(A, "2").dims
    assert strat_module(A, order, "proper_nabla", "1").dims == {(0, "1"): 1}
    assert strat_module(A, order, "proper_nabla", "2").dims == {(0, "2"): 1, (-1, "1"): 1}


def test_unknown_standard_kind(exm3):
    """Test an unknown module kind"""
    with pytest.raises(UsageError):
        strat_module(exm3.algebra, exm3.order, "costandard", "1")


def test_loop_with_arrow_not_stratified(exm1):
    """Test K(1) keeps producing standard layers up to the window"""
    A = exm1.algebra
    result = is_standardly_stratified(A, exm1.order)
    assert result.verdict == VIOLATED
    assert result.verdicts == {"1": VIOLATED, "2": HOLDS}
    report = result.reports["1"]
    assert report.layers == [Layer("delta", "2", -j) for j in range(1, A.N)]
    assert report.boundary_layers == [Layer("delta", "2", -A.N, reliable=False)]
    assert report.diagnosis


def test_arrow_into_loop_stratified(exm2):
    """Test K(1) is a single shifted standard module"""
    result = is_standardly_stratified(exm2.algebra, exm2.order)
    assert result.verdict == HOLDS
    assert result.reports["1"].layers == [Layer("delta", "2", -1)]
    assert result.reports["1"].status == "complete"


def test_square_stratified(exm3):
    """Test the commuting square is standardly stratified"""
    result = is_standardly_stratified(exm3.algebra, exm3.order)
    assert result.verdict == HOLDS
    assert standard_kernel(exm3.algebra, exm3.order, "1").label == "K(1)"


def test_layer_label():
    """Test layer labels carry the shift"""
    assert str(Layer("delta", "2", -1)) == "Δ(2)<-1>"
    assert Layer("delta", "2", -3).degree == 3


def test_peel_projective(exm3):
    """Test P(1) has layers Δ(2)<-1> and Δ(1)"""
    report = peel(projective(exm3.algebra, "1"), exm3.order)
    assert report.status == "complete"
    assert report.layers == [Layer("delta", "2", -1), Layer("delta", "1", 0)]


def test_reciprocity(exm3):
    """Test standard multiplicities of P(1) from hom spaces"""
    P = projective(exm3.algebra, "1")
    assert filtration_multiplicity(P, exm3.order, "delta", "2", -1) == 1
    assert filtration_multiplicity(P, exm3.order, "delta", "1", 0) == 1
    assert filtration_multiplicity(P, exm3.order, "delta", "2", 0) == 0


def test_filtration_of_projective(exm3):
    """Test P(1) is filtered by Δ(2)<-1> under Δ(1)"""
    report = delta_filtration(projective(exm3.algebra, "1"), exm3.order)
    assert report.status == "complete"
    assert [str(x) for x in report.layers] == ["Δ(2)<-1>", "Δ(1)"]
    assert report.diagnosis == []


def test_simple_has_no_standard_filtration(exm3):
    """Test L(1) is not Δ(1) because the loop at 1 survives in Δ(1)"""
    A, order = exm3.algebra, exm3.order
    L = simple(A, "1")
    report = delta_filtration(L, order)
    assert report.status == "failed"
    assert report.layers == []
    assert report.diagnosis[0].startswith("trace of 1 in degree 1 at vertex 1")
    assert any("ext^1(L(1), ∇̄(1)<-1>) has dimension 1" in line for line in report.diagnosis)
    with pytest.raises(RefusedError):
        filtration_multiplicity(L, order, "delta", "1", 0)


def test_injective_multiplicities(exm3):
    """Test I(2) has one ∇̄(2)<j> for every j in the window"""
    A = exm3.algebra
    table = injective_nabla_multiplicities(A, exm3.order, "2")
    assert table == {("2", j): 1 for j in range(A.N + 1)}


@pytest.mark.parametrize("which", ["P1", "P2", "T1", "T2"])
def test_multiplicities_from_homs_match_layers(exm3, which):
    """Test [M : Δ(λ)<j>] = dim hom(M, ∇̄(λ)<j>) against the peeled layers"""
    A, order = exm3.algebra, exm3.order
    kind, lam = which[0], which[1]
    M = projective(A, lam) if kind == "P" else tilting_module(A, order, lam).module
    layers = peel(M, order).multiplicities()
    for mu in A.vertices:
        for j in range(-4, 3):
            assert filtration_multiplicity(M, order, "delta", mu, j) == layers.get((mu, j), 0)


@pytest.mark.parametrize("name", ["exm1", "exm2", "exm3", "kx"])
def test_stable_under_truncation(name):
    """Test N = 6 and N = 8 agree on standard modules, verdicts and low layers"""
    small, large = load(name, truncation=6), load(name, truncation=8)
    for kind in KINDS:
        for lam in small.algebra.vertices:
            m6 = strat_module(small.algebra, small.order, kind, lam)
            m8 = strat_module(large.algebra, large.order, kind, lam)
            assert all(m6.dim(j, v) == m8.dim(j, v) for j in range(-4, 5) for v in small.algebra.vertices)
            if m6.lo_exact and m6.hi_exact and m8.lo_exact and m8.hi_exact:
                assert m6.dims == m8.dims
    r6 = is_standardly_stratified(small.algebra, small.order)
    r8 = is_standardly_stratified(large.algebra, large.order)
    assert r6.verdicts == r8.verdicts
    for lam, report in r6.reports.items():
        low = [x for x in report.layers if x.degree <= 4]
        assert low == [x for x in r8.reports[lam].layers if x.degree <= 4]
