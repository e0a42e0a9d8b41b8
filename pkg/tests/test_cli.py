import json

from app.config import settings
from app.main import app


def invoke(runner, fixtures_dir, name, *args):
    result = runner.invoke(app, ["--input", str(fixtures_dir / f"{name}.alg"), *args])
    return result, result.output


def test_validate(runner, fixtures_dir):
    """Test validating the commuting square"""
    result, output = invoke(runner, fixtures_dir, "exm3", "--command", "validate")
    assert result.exit_code == 0
    report = json.loads(output)
    assert report["status"] == "computed"
    assert report["command"] == "validate"
    assert report["truncation"] == 6
    assert report["data"]["dimensions"] == [2, 3, 3, 3, 3, 3, 3]
    assert report["data"]["order"] == "1 < 2"


def test_truncation_override(runner, fixtures_dir):
    """Test --truncate wins over the input file"""
    result, output = invoke(runner, fixtures_dir, "exm3", "--command", "validate", "--truncate", "3")
    report = json.loads(output)
    assert report["truncation"] == 3
    assert report["data"]["dimensions"] == [2, 3, 3, 3]


def test_stratify_violated(runner, fixtures_dir):
    """Test exit code 1 for a violated property"""
    result, output = invoke(runner, fixtures_dir, "exm1", "--command", "stratify")
    assert result.exit_code == 1
    report = json.loads(output)
    assert report["status"] == "violated"
    assert report["data"]["verdicts"] == {"1": "violated", "2": "holds"}


def test_order_override(runner, fixtures_dir):
    """Test reversing the order makes the loop algebra stratified"""
    result, output = invoke(runner, fixtures_dir, "exm1", "--command", "stratify", "--order", "2 < 1")
    assert result.exit_code == 0
    assert json.loads(output)["status"] == "computed"


def test_classify_balanced_summary(runner, fixtures_dir):
    """Test the text summary of a balanced algebra"""
    result, output = invoke(runner, fixtures_dir, "exm3", "--format", "summary")
    assert result.exit_code == 0
    assert output.startswith("classify: computed\n")
    assert "  balanced at N = 6\n" in output


def test_classify_stratified_only(runner, fixtures_dir):
    """Test the headline names the first rung that failed"""
    result, output = invoke(runner, fixtures_dir, "exm2")
    assert result.exit_code == 1
    report = json.loads(output)
    assert report["summary"][0] == "stratified; not weakly adapted (violated within N = 8)"
    assert report["data"]["ladder"] == "stratified"


def test_tilting_refused(runner, fixtures_dir):
    """Test tilting modules are refused for an algebra that is not stratified"""
    result, output = invoke(runner, fixtures_dir, "exm1", "--command", "tilting")
    assert result.exit_code == 1
    report = json.loads(output)
    assert report["status"] == "violated"
    assert report["detail"].startswith("tilting: ")


def test_simples_as_tilting(runner, fixtures_dir):
    """Test both simples of the square come out linear with the right Euler characteristic"""
    result, output = invoke(runner, fixtures_dir, "exm3", "--command", "simples-as-tilting")
    assert result.exit_code == 0
    data = json.loads(output)["data"]
    assert data["1"]["euler_matches"]
    assert data["2"]["euler_matches"]
    assert data["1"]["linear"]


def test_koszul(runner, fixtures_dir):
    """Test the Koszul dual of k[x]"""
    result, output = invoke(runner, fixtures_dir, "kx", "--command", "koszul")
    assert result.exit_code == 0
    report = json.loads(output)
    assert report["data"]["algebra"]["name"] == "E(A)"
    assert report["data"]["algebra"]["cartan"][2] == [[0]]


def test_unknown_command(runner, fixtures_dir):
    """Test an unknown command is an input error"""
    result, output = invoke(runner, fixtures_dir, "kx", "--command", "dualize")
    assert result.exit_code == 3
    report = json.loads(output)
    assert report["status"] == "error"
    assert "unknown command" in report["detail"]


def test_presentation_error(runner, tmp_path):
    """Test a malformed input reports its line"""
    path = tmp_path / "bad.alg"
    path.write_text("vertex 1\narrow x 1 1\narrow x 1 1\n", encoding="utf-8")
    result = runner.invoke(app, ["--input", str(path), "--command", "validate"])
    assert result.exit_code == 3
    assert json.loads(result.output)["detail"] == "line 3: duplicate arrow name 'x'"


def test_missing_input(runner, tmp_path):
    """Test a missing input file"""
    result = runner.invoke(app, ["--input", str(tmp_path / "none.alg")])
    assert result.exit_code == 3


def test_bad_format(runner, fixtures_dir):
    """Test an unknown output format"""
    result, _ = invoke(runner, fixtures_dir, "kx", "--format", "yaml")
    assert result.exit_code == 3


def test_output_file_is_deterministic(runner, fixtures_dir, tmp_path):
    """Test two runs write identical reports"""
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        result, output = invoke(runner, fixtures_dir, "exm2", "--command", "standard-modules", "--out", str(out))
        assert output == ""
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text(encoding="utf-8"))["command"] == "standard-modules"


def test_commute_on_square(runner, fixtures_dir):
    """Test the two dualities commute on the commuting square"""
    result, output = invoke(runner, fixtures_dir, "exm3", "--command", "commute")
    assert result.exit_code == 0
    report = json.loads(output)
    assert report["status"] == "computed"
    assert report["data"]["comparison"]["verdict"] == "isomorphic"


def test_ringel_with_small_truncation(runner, fixtures_dir):
    """Test exit code 2 when the Ringel dual is reliable only in degree 0"""
    result, output = invoke(runner, fixtures_dir, "exm3", "--command", "ringel", "--truncate", "3")
    assert result.exit_code == 2
    report = json.loads(output)
    assert report["status"] == "undetermined"
    assert report["detail"].startswith("R(A): ")


def test_koszul_ext_tables(runner, fixtures_dir):
    """Test the ext table between the simples of k[x]"""
    result, output = invoke(runner, fixtures_dir, "kx", "--command", "koszul")
    assert result.exit_code == 0
    tables = json.loads(output)["data"]["ext_tables"]
    assert tables == [{"source": "L(1)", "target": "L(1)",
                       "cells": [{"degree": 0, "shift": 0, "dim": 1}, {"degree": 1, "shift": -1, "dim": 1}]}]


def test_standard_modules_injectives(runner, fixtures_dir):
    """Test ∇̄-multiplicities of the injectives are reported"""
    result, output = invoke(runner, fixtures_dir, "exm3", "--command", "standard-modules")
    assert result.exit_code == 0
    data = json.loads(output)["data"]
    assert data["projective_filtrations"]["1"]["status"] == "complete"
    rows = data["injective_multiplicities"]["2"]
    assert rows == [{"vertex": "2", "shift": j, "multiplicity": 1} for j in range(7)]


def test_stratify_stable_under_truncation(runner, fixtures_dir):
    """Test verdicts at N = 6 and N = 8 agree"""
    for name in ("exm1", "exm2", "exm3", "kx"):
        _, small = invoke(runner, fixtures_dir, name, "--command", "stratify", "--truncate", "6")
        _, large = invoke(runner, fixtures_dir, name, "--command", "stratify", "--truncate", "8")
        assert json.loads(small)["data"]["verdicts"] == json.loads(large)["data"]["verdicts"]


def test_help_names_the_app(runner):
    """Test the help text starts with the configured app name"""
    result = runner.invoke(app, ["--help"])
    assert result.exit_code == 0
    assert settings.app_name in result.output
