from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binomial_ode import EMPTY_TOWER, Scalar, Tower, tower_extend
from binomial_ode.errors import DivisionByZero, NonIsolating, NonMonic, UnboundUnit
from binomial_ode.scalar import embed, invert, omega_tower, reduce

from helpers import R_TOWER, W, W_TOWER, tower_scalars


def test_extend_with_primitive_cube_root():
    tower = tower_extend(EMPTY_TOWER, [1, 1, 1], (complex(-0.5, 0.866), 0.01), name="w")
    assert tower.names() == ["w"]
    w = tower.gen("w")
    assert (w**3 - 1).is_zero()
    assert not (w - 1).is_zero()


def test_extend_with_real_cube_root_over_omega():
    assert R_TOWER.names() == ["w", "r"]
    r = R_TOWER.gen("r")
    assert (r**3).is_rational() and (r**3).to_fraction() == Fraction(2, 3)
    # oracle: bisection on t^3 - 2/3 over the reals
    lo, hi = mpmath.mpf(0), mpmath.mpf(1)
    for _ in range(60):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if mid**3 < mpmath.mpf(2) / 3 else (lo, mid)
    assert embed(r, 80).contains(lo, slack=1e-15)


def test_reducible_defining_polynomial_accepted_with_isolating_hint():
    tower = tower_extend(EMPTY_TOWER, [-1, 0, 1], (1, 0.5), name="s")
    s = tower.gen("s")
    assert (s * s).to_fraction() == 1
    with pytest.raises(NonIsolating):
        tower_extend(EMPTY_TOWER, [-1, 0, 1], (0, 5), name="s")


def test_extend_rejects_non_monic():
    with pytest.raises(NonMonic):
        tower_extend(EMPTY_TOWER, [1, 0, 2], (0.7j, 0.1))


def test_reduce_examples():
    assert reduce(W**2) == -W - 1
    assert reduce((1 + W) * (-W)) == Scalar(1)
    u = Scalar.unit("u")
    assert reduce(u * u.inverse()) == Scalar(1)


def test_invert_examples():
    assert invert(Fraction(2, 3)) == Scalar(Fraction(3, 2))
    assert invert(1 + W) == -W
    with pytest.raises(DivisionByZero):
        invert(Scalar(0))


def test_embed_examples():
    ball = embed(W, 40)
    assert ball.contains(mpmath.mpc(-0.5, mpmath.sqrt(3) / 2), slack=1e-11)
    r = R_TOWER.gen("r")
    assert embed(r, 40).contains(mpmath.cbrt(mpmath.mpf(2) / 3), slack=1e-11)
    with pytest.raises(UnboundUnit):
        embed(Scalar.unit("u") + 1, 40)
    assert embed(Scalar.unit("u"), 40, {"u": 2}).contains(2)


def test_text_form():
    u = Scalar.unit("u")
    s = Scalar(Fraction(3, 2)) + 2 * W - u.inverse()
    text = s.text()
    for piece in ("3/2", "2*w", "u^-1"):
        assert piece in text


def test_descriptor_round_trip():
    again = Tower.from_descriptor(R_TOWER.describe())
    assert again.names() == R_TOWER.names()
    assert (again.gen("r") ** 3).to_fraction() == Fraction(2, 3)


def test_laurent_units():
    u = Scalar.unit("e", 1)
    assert u**-2 * u**2 == Scalar(1)


# -- properties -----------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(tower_scalars(), tower_scalars(), tower_scalars())
def test_ring_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)


@settings(max_examples=100, deadline=None)
@given(tower_scalars())
def test_invert_is_two_sided(x):
    try:
        inv = invert(x)
    except DivisionByZero:
        assert x.is_zero()
        return
    assert x * inv == Scalar(1)
    assert inv * x == Scalar(1)


@settings(max_examples=50, deadline=None)
@given(tower_scalars(), tower_scalars())
def test_embed_is_multiplicative(x, y):
    prod = embed(x, 80) * embed(y, 80)
    direct = embed(x * y, 80)
    assert prod.overlaps(direct)
    assert prod.contains(embed(x * y, 200).mid)


@settings(max_examples=50, deadline=None)
@given(tower_scalars(), tower_scalars(), tower_scalars())
def test_normal_form_is_canonical(x, y, z):
    left = (x * y + z) * (x - y)
    right = x * x * y - x * y * y + x * z - y * z
    for prec in (53, 100, 200):
        assert embed(left, prec).overlaps(embed(right, prec))
    assert left.terms == right.terms


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 50), st.integers(1, 50))
def test_omega_tower_is_reused(p, q):
    tower, w = omega_tower(W_TOWER)
    assert tower is W_TOWER
    x = Scalar(Fraction(p, q)) * w
    assert x * w * w == Scalar(Fraction(p, q))
