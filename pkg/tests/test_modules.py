import pytest

from app.engine import linalg
from app.engine.modules import (
    as_module,
    canonical_module,
    composition_multiplicity,
    direct_sum,
    free_module,
    generate,
    graded_dual,
    hom_dim,
    injective,
    is_isomorphism,
    kernel,
    projective,
    radical,
    shift,
    shift_label,
    simple,
    socle,
    structure_parts,
    trace_submodule,
    whole,
)
from app.exceptions import UsageError


def test_projective_of_square(exm3):
    """Test P(1) has one path to each vertex in every positive degree"""
    A = exm3.algebra
    P = projective(A, "1")
    assert P.label == "P(1)"
    assert P.dim(0, "1") == 1 and P.dim(0, "2") == 0
    for d in range(1, A.N + 1):
        assert P.dim(d, "1") == 1
        assert P.dim(d, "2") == 1
    assert not P.hi_exact
    assert P.check_relations() == []


def test_projective_at_sink_is_simple(exm1):
    """Test P(2) is simple when 2 has no outgoing arrows"""
    P = projective(exm1.algebra, "2")
    assert P.hi_exact
    assert P.dims == {(0, "2"): 1}


def test_injective_is_dual_of_opposite_projective(exm1):
    """Test I(2) collects the paths ending at 2"""
    I = injective(exm1.algebra, "2")
    assert I.dim(0, "2") == 1
    assert I.dim(-1, "1") == 1
    assert I.dim(-3, "1") == 1
    assert not I.lo_exact
    assert I.hi_exact


def test_shift_moves_degrees(exm3):
    """Test M<i>_j = M_{i+j}"""
    L = simple(exm3.algebra, "1", 2)
    assert L.lo == L.hi == -2
    assert L.label == "L(1)<2>"
    P = shift(projective(exm3.algebra, "1"), -1)
    assert P.dim(1, "1") == 1
    assert P.dim(0, "1") == 0


def test_shift_label():
    """Test shifts in labels accumulate"""
    assert shift_label("P(1)", 1) == "P(1)<1>"
    assert shift_label("P(1)<1>", -1) == "P(1)"
    assert shift_label("P(1)<1>", 2) == "P(1)<3>"


def test_unknown_kind(exm3):
    """Test asking for a module kind that does not exist"""
    with pytest.raises(UsageError):
        canonical_module(exm3.algebra, "tilted", "1")
    with pytest.raises(UsageError):
        canonical_module(exm3.algebra, "simple", "7")


def test_top_of_projective(exm3):
    """Test the top of P(1) is L(1)"""
    parts = structure_parts(projective(exm3.algebra, "1"))
    assert parts.top.dims == {(0, "1"): 1}
    assert kernel(parts.top_projection).equals(parts.radical)


def test_socle_of_simple(exm1):
    """Test the socle of a simple module is everything"""
    soc, truncated = socle(simple(exm1.algebra, "2"))
    assert soc.total_dim == 1
    assert not truncated


def test_generated_submodule(exm3):
    """Test the submodule generated by b1 inside P(1)"""
    A = exm3.algebra
    P = projective(A, "1")
    S = generate(P, [((1, "1"), {0: A.field.one})])
    assert S.dim((1, "2")) == 0
    assert S.dim((2, "2")) == 1
    assert S.total_dim == A.N + (A.N - 1)
    assert radical(P).total_dim == 2 * A.N


def test_direct_sum_of_simples(exm3):
    """Test the direct sum of the two simples"""
    A = exm3.algebra
    M, offsets = direct_sum([simple(A, "1"), simple(A, "2")])
    assert M.dims == {(0, "1"): 1, (0, "2"): 1}
    assert M.label == "L(1) + L(2)"
    assert offsets == [{(0, "1"): 0}, {(0, "2"): 0}]


def test_hom_between_projectives(exm3):
    """Test degree-zero maps out of projectives pick elements"""
    A = exm3.algebra
    assert hom_dim(projective(A, "1"), projective(A, "1")) == 1
    assert hom_dim(projective(A, "2"), projective(A, "1")) == 0
    assert hom_dim(shift(projective(A, "1"), -1), projective(A, "1")) == 1


def test_free_module_matches_projective(exm3):
    """Test a free module on one generator is the projective"""
    A = exm3.algebra
    F = free_module(A, [("1", 0)], 0, A.N)
    P = projective(A, "1")
    assert F.module.dims == P.dims
    assert is_isomorphism(F.map_to(P, [{0: A.field.one}]))


def test_graded_dual_is_an_involution(exm3):
    """Test dualizing P(1) twice gives P(1) back"""
    A = exm3.algebra
    P = projective(A, "1")
    D = graded_dual(P)
    assert D.dims == {(-j, v): n for (j, v), n in P.dims.items()}
    assert (D.lo, D.hi) == (-P.hi, -P.lo)
    DD = graded_dual(D, target_algebra=A)
    assert DD.dims == P.dims
    assert (DD.lo, DD.hi, DD.lo_exact, DD.hi_exact) == (P.lo, P.hi, P.lo_exact, P.hi_exact)
    for key, mat in P.actions.items():
        assert linalg.columns(DD.actions[key]) == linalg.columns(mat)


def test_trace_is_idempotent(exm3):
    """Test the trace of P(2)<-1> inside its own trace is everything"""
    P = projective(exm3.algebra, "1")
    S = trace_submodule(P, [("2", 1)])
    assert S.dim((1, "2")) == 1
    assert S.dim((1, "1")) == 0
    T, _ = as_module(S)
    again = trace_submodule(T, [("2", 1)])
    assert again.total_dim == T.total_dim
    assert again.equals(whole(T))


def test_maps_out_of_projectives(exm3):
    """Test hom(P(λ)<j>, M) has the dimension of e_λ M_{-j}"""
    A = exm3.algebra
    M = projective(A, "1")
    for lam in A.vertices:
        for j in range(-(A.N - 1), 1):
            assert hom_dim(shift(projective(A, lam), j), M) == M.dim(-j, lam)


def test_composition_multiplicity(exm3):
    """Test [P(1) : L(2)<-1>] is one"""
    P = projective(exm3.algebra, "1")
    assert composition_multiplicity(P, "2", 1) == 1
    assert composition_multiplicity(P, "2", 0) == 0
    assert composition_multiplicity(P, "1", 0) == 1
