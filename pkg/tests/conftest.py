import pytest

from clsas import Symbols


@pytest.fixture
def S():
    """Rank-2 session with the parameter symbols used across the suite."""
    return Symbols(2, ("alpha", "theta", "gamma", "mu", "beta"))


@pytest.fixture
def syms(S):
    return {name: S.sym(name) for name in ("e1", "e2", "alpha", "theta", "gamma", "mu", "beta")}
