from pathlib import Path

import pytest

from jetcalc import Bundle, VectorOperator

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def scalar_bundle():
    """One base variable x, one fiber variable u, one parameter c."""
    return Bundle(("x",), ("u",), ("c",))


@pytest.fixture
def intro_pair(scalar_bundle):
    """The running example: F = u_x^2 and G = u_x + c*x."""
    b = scalar_bundle
    p = b.jet(0, (1,))
    f = VectorOperator([p * p])
    g = VectorOperator([p + b.param("c") * b.base_var(0)])
    return b, f, g


@pytest.fixture
def plane_bundle():
    """Two base variables, two fiber variables, no parameters."""
    return Bundle(("x", "y"), ("u", "v"))


@pytest.fixture
def fixtures_dir():
    return FIXTURES
