from pathlib import Path

import pytest
from typer.testing import CliRunner

from app.dependencies import Job, resolve_job
from app.parser import load_job

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name: str, **update) -> Job:
    """Resolve a fixture file, optionally overriding the truncation, the field or job fields"""
    spec = load_job(FIXTURES / f"{name}.alg")
    for key in ("truncation", "field"):
        if key in update:
            spec = spec.model_copy(update={"presentation": spec.presentation.model_copy(
                update={key: update.pop(key)})})
    if update:
        spec = spec.model_copy(update=update)
    return resolve_job(spec)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def field_job():
    """The base field: one vertex, no arrows"""
    return load("field")


@pytest.fixture(scope="session")
def kx():
    """Polynomial ring in one variable of degree one"""
    return load("kx")


@pytest.fixture(scope="session")
def exm1():
    """Loop at 1 and an arrow 1 -> 2; not standardly stratified for 1 < 2"""
    return load("exm1")


@pytest.fixture(scope="session")
def exm2():
    """Arrow 1 -> 2 and a loop at 2; stratified, not weakly adapted"""
    return load("exm2")


@pytest.fixture(scope="session")
def exm3():
    """Commuting square with loops at both vertices; balanced"""
    return load("exm3")


@pytest.fixture(scope="session")
def free2():
    """Oriented two-cycle without relations, truncated at 3"""
    return load("free2")


@pytest.fixture
def runner():
    """CLI test runner"""
    return CliRunner()
