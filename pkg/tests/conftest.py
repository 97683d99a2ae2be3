import pytest

from quadrica.funfield import surface
from quadrica.poly import Poly, parse_poly

P2_VARS = ("x", "y", "z")
P1XP1_VARS = ("x0", "x1", "y0", "y1")

F_TEXT = "x^2+y^2+z^2-2*(x*y+x*z+y*z)"
H_TEXT = "x1^2*y0^2+x0^2*y1^2+x0^2*y0^2-2*(x1*y1*x0*y0+x1*x0*y0^2+y1*y0*x0^2)"


@pytest.fixture(scope="session")
def p2():
    return surface("p2")


@pytest.fixture(scope="session")
def p1xp1():
    return surface("p1xp1")


@pytest.fixture(scope="session")
def xyz():
    return tuple(Poly.var(P2_VARS, v) for v in P2_VARS)


@pytest.fixture(scope="session")
def F():
    return parse_poly(F_TEXT, P2_VARS)


@pytest.fixture(scope="session")
def Fb(F):
    """The chart quadric F(x, y, 1)."""
    return F.substitute({"z": 1})


@pytest.fixture(scope="session")
def hpoly():
    return parse_poly(H_TEXT, P1XP1_VARS)


@pytest.fixture(scope="session")
def x4():
    return tuple(Poly.var(P1XP1_VARS, v) for v in P1XP1_VARS)
