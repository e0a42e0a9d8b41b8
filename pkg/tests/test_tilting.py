import pytest

from app.engine.duality import koszul_dual
from app.engine.homology import is_linear
from app.engine.strat import HOLDS, VIOLATED, strat_module
from app.engine.tilting import (
    LADDER,
    characteristic_tilting_summary,
    classify,
    require_tilting,
    simple_as_tilting_complex,
    tilting_coresolution,
    tilting_module,
    tilting_resolution,
)
from app.exceptions import RefusedError


def test_tilting_at_minimal_vertex(exm3):
    """Test T(1) is Δ(1) when nothing lies below 1"""
    A, order = exm3.algebra, exm3.order
    T = tilting_module(A, order, "1")
    assert T.constructible
    assert [str(x) for x in T.layers] == ["Δ(1)"]
    assert T.module.dims == strat_module(A, order, "delta", "1").dims


def test_tilting_at_top_vertex(exm3):
    """Test T(2) is P(1)<1>: Δ(2) with Δ(1)<1> glued on top"""
    T = tilting_module(exm3.algebra, exm3.order, "2")
    assert T.constructible
    assert T.label == "T(2)"
    assert [str(x) for x in T.layers] == ["Δ(2)", "Δ(1)<1>"]
    assert T.module.dim(-1, "1") == 1
    assert T.module.dim(0, "1") == 1
    assert T.module.dim(0, "2") == 1
    assert T.indecomposable
    assert T.nabla_failures == []


def test_tilting_not_constructible(exm2):
    """Test T(2) keeps needing extensions when 2 carries a loop below an arrow"""
    T = tilting_module(exm2.algebra, exm2.order, "2")
    assert T.verdict == VIOLATED
    assert T.pending
    with pytest.raises(RefusedError) as exc:
        require_tilting(exm2.algebra, exm2.order, "2")
    assert exc.value.exit_code == 1
    assert exc.value.detail.startswith("T(2): ")


def test_tilting_summary(exm3):
    """Test the per-vertex summary of the characteristic tilting module"""
    summaries = characteristic_tilting_summary(exm3.algebra, exm3.order)
    assert [s.vertex for s in summaries] == ["1", "2"]
    assert all(s.verdict == HOLDS for s in summaries)
    assert [str(x) for x in summaries[1].delta_layers] == ["Δ(2)", "Δ(1)<1>"]
    assert summaries[1].lo == -1


def test_coresolutions_of_standard_modules(exm3):
    """Test Δ(1) -> T(1) and Δ(2) -> T(2) -> T(1)<1>"""
    A, order = exm3.algebra, exm3.order
    assert tilting_coresolution(A, order, "1").term_list() == [(0, ["T(1)"])]
    C = tilting_coresolution(A, order, "2")
    assert C.term_list() == [(0, ["T(2)"]), (1, ["T(1)<1>"])]
    assert is_linear(C, "tilting")


def test_resolution_of_proper_costandard(exm3):
    """Test T(1)<-1> -> T(1) resolves ∇̄(1)"""
    A, order = exm3.algebra, exm3.order
    R = tilting_resolution(strat_module(A, order, "proper_nabla", "1"), order)
    assert R.term_list() == [(-1, ["T(1)<-1>"]), (0, ["T(1)"])]
    assert R.to_complex().squares_to_zero()


def test_classify_balanced(exm3):
    """Test the commuting square reaches the top of the ladder"""
    result = classify(exm3.algebra, exm3.order)
    assert result.status == LADDER[-1] == "balanced"
    assert result.verdict == HOLDS
    assert set(result.coresolutions) == {"1", "2"}
    assert set(result.resolutions) == {"1", "2"}


def test_classify_stops_at_stratified(exm2):
    """Test a non-constructible tilting module stops the climb"""
    result = classify(exm2.algebra, exm2.order)
    assert result.status == "stratified"
    assert result.verdict == VIOLATED
    assert any(r.startswith("T(2) not finitely constructible") for r in result.reasons)


def test_classify_not_stratified(exm1):
    """Test the ladder bottom"""
    result = classify(exm1.algebra, exm1.order)
    assert result.status == "not-stratified"
    assert result.verdict == VIOLATED
    assert result.reasons[0].startswith("K(1): ")


def test_simple_as_tilting_complex(exm3):
    """Test L(1) and L(2) as linear complexes of tilting modules"""
    A, order = exm3.algebra, exm3.order
    X = simple_as_tilting_complex(A, order, "1")
    assert X.term_list() == [(-1, ["T(1)<-1>"]), (0, ["T(1)"])]
    Y = simple_as_tilting_complex(A, order, "2")
    terms = {i: sorted(names) for i, names in Y.term_list()}
    assert terms == {-1: ["T(2)<-1>"], 0: ["T(1)", "T(2)"], 1: ["T(1)<1>"]}
    assert is_linear(Y.to_complex(), "tilting")


def test_simple_as_tilting_refused(exm2):
    """Test simples are refused below the balanced rung"""
    with pytest.raises(RefusedError) as exc:
        simple_as_tilting_complex(exm2.algebra, exm2.order, "1")
    assert exc.value.exit_code == 1


def test_resolution_of_top_proper_costandard(exm3):
    """Test T(2)<-1> -> T(2) resolves ∇̄(2)"""
    A, order = exm3.algebra, exm3.order
    R = tilting_resolution(strat_module(A, order, "proper_nabla", "2"), order)
    assert R.term_list() == [(-1, ["T(2)<-1>"]), (0, ["T(2)"])]
    assert is_linear(R.to_complex(), "tilting")


def test_classify_koszul_dual_of_square(exm3):
    """Test resolutions cut by the window still count as linear"""
    E = koszul_dual(exm3.algebra, exm3.order, exm3.depth)
    result = classify(E.algebra(), E.order)
    assert result.status == "balanced"
    assert result.verdict == HOLDS
    assert result.boundary
    assert all(line.startswith("tilting resolution of ∇̄(") for line in result.boundary)
