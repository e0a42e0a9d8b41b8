from fractions import Fraction

import pytest

from app.config import settings
from app.exceptions import PresentationError
from app.parser import load_job, parse_input, parse_order, parse_relation

SQUARE = """\
# commuting square
field Q
vertex 1
vertex 2
arrow b1 1 1
arrow b2 2 2
arrow alpha 1 2
relation alpha*b2 - b1*alpha
order 1 < 2
truncate 6
"""


def test_parse_square(fixtures_dir):
    """Test reading the commuting square fixture"""
    spec = load_job(fixtures_dir / "exm3.alg")
    p = spec.presentation
    assert p.vertices == ["1", "2"]
    assert [a.name for a in p.arrows] == ["b1", "b2", "alpha"]
    assert len(p.relations) == 1
    assert spec.order == [["1"], ["2"]]
    assert p.truncation == 6
    assert spec.depth == 6


def test_defaults_from_settings():
    """Test missing truncate and depth lines fall back to the settings"""
    spec = parse_input("vertex 1\narrow x 1 1\n")
    assert spec.presentation.truncation == settings.default_truncation
    assert spec.depth == settings.default_depth
    assert spec.presentation.field == settings.default_field
    assert spec.order is None


def test_several_vertices_on_one_line():
    """Test a vertex line may declare more than one id"""
    spec = parse_input("vertex 1 2 3\n")
    assert spec.presentation.vertices == ["1", "2", "3"]


def test_arrow_degree():
    """Test the optional degree column"""
    spec = parse_input("vertex 1\narrow x 1 1 2\n")
    assert spec.presentation.arrows[0].degree == 2


def test_parse_relation_coefficients():
    """Test signs, fractions and merged terms"""
    r = parse_relation("2 a*b - 1/2 c*d + a*b")
    terms = {tuple(w): Fraction(c) for c, w in r.terms}
    assert terms == {("a", "b"): Fraction(3), ("c", "d"): Fraction(-1, 2)}


def test_parse_relation_cancelling_terms():
    """Test a relation whose terms cancel"""
    with pytest.raises(PresentationError) as exc:
        parse_relation("a*b - a*b", line=7)
    assert exc.value.line == 7


def test_parse_order():
    """Test classes and ties"""
    assert parse_order("1, 2 < 3") == [["1", "2"], ["3"]]
    with pytest.raises(PresentationError):
        parse_order("1 < < 2")


def test_duplicate_arrow_line_number():
    """Test the line number of a duplicate arrow"""
    text = "vertex 1\narrow x 1 1\n\narrow x 1 1\n"
    with pytest.raises(PresentationError) as exc:
        parse_input(text)
    assert exc.value.line == 4
    assert exc.value.detail.startswith("line 4: duplicate arrow")


def test_inhomogeneous_relation_line_number():
    """Test an inhomogeneous relation is reported at its line"""
    text = "vertex 1\narrow x 1 1\narrow y 1 1 2\nrelation x*x*x - y\n"
    with pytest.raises(PresentationError) as exc:
        parse_input(text)
    assert exc.value.line == 4
    assert "homogeneous" in exc.value.detail


def test_order_not_a_partition():
    """Test an order naming an unknown vertex"""
    text = SQUARE.replace("order 1 < 2", "order 1 < 3")
    with pytest.raises(PresentationError) as exc:
        parse_input(text)
    assert exc.value.line == 9


def test_unknown_directive():
    """Test an unknown keyword"""
    with pytest.raises(PresentationError) as exc:
        parse_input("vertex 1\nloop x 1\n")
    assert exc.value.line == 2


def test_undeclared_vertex():
    """Test an arrow into an undeclared vertex"""
    with pytest.raises(PresentationError) as exc:
        parse_input("vertex 1\narrow x 1 2\n")
    assert exc.value.line == 2


def test_bad_truncation():
    """Test a non-numeric truncation"""
    with pytest.raises(PresentationError) as exc:
        parse_input("vertex 1\ntruncate eight\n")
    assert "integer" in exc.value.detail


def test_no_vertices():
    """Test an input without vertices"""
    with pytest.raises(PresentationError) as exc:
        parse_input("# nothing here\nfield Q\n")
    assert exc.value.exit_code == 3


def test_missing_file(tmp_path):
    """Test reading a file that does not exist"""
    with pytest.raises(PresentationError):
        load_job(tmp_path / "missing.alg")
