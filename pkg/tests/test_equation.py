import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binomial_ode import ExpPoly, Poly, Scalar, Shape, Z, aux_pair, build_equation, exp_of, residual, theorem1_branch, verify
from binomial_ode.classifier import classify
from binomial_ode.equation import Branch
from binomial_ode.errors import ConstantExponent, DegenerateCoefficients, ShapeMismatch

from helpers import CLOSED_FORM_CASES, exppolys, polys, random_bindings
from binomial_ode.classifier import instantiate_family

E = lambda k: exp_of(k * Z)  # noqa: E731

EX21 = build_equation(Shape.E13, 16, 2, 64, Z)
EX22 = build_equation(Shape.E13, 28, 1, 12, 3 * Z)
EX23 = build_equation(Shape.E13, -128, 2, -288, 2 * Z)


def test_build_stores_coefficients():
    assert (EX21.a, EX21.b, EX21.c, EX21.d) == (Poly.const(16), Poly.const(2), Poly.const(64), Z)
    assert EX21.rhs_unit == Scalar(1)
    b = 16 * Z**3 + 24 * Z**2 + 20 * Z + 7
    eq = build_equation(Shape.E14, 2, b, -9, Z**2 + Z)
    assert eq.b == b and eq.d == Z**2 + Z


def test_build_shifts_exponent_constant():
    eq = build_equation(Shape.E13, 1, 1, 1, 2 * Z + 1)
    assert eq.d == 2 * Z
    assert eq.rhs_unit == Scalar.unit("e", 2)


def test_build_rejects_bad_input():
    with pytest.raises(ConstantExponent):
        build_equation(Shape.E13, 1, 1, 1, Poly.const(3))
    with pytest.raises(DegenerateCoefficients):
        build_equation(Shape.E14, 1, 0, 1, Z)
    assert build_equation(Shape.E14, 1, 0, 1, Z, degenerate=True).degenerate


def test_residual_examples():
    assert residual(EX21, E(2) + 2).is_zero()
    displayed = build_equation(Shape.E14, 3, 2, 88, 2 * Z)
    assert residual(displayed, 2 * E(2)).is_zero()
    prose = build_equation(Shape.E14, 3, 1, 88, 2 * Z)
    # oracle: 3*(4e^{2z})(8e^{2z}) - 1*(2e^{2z})^2 - 88e^{4z} = (96 - 4 - 88) e^{4z}
    assert residual(prose, 2 * E(2)) == 4 * E(4)


def test_verify_examples():
    assert verify(EX22, 2 * E(3))
    assert verify(EX23, E(2) + 2 * E(-4))
    r = residual(EX21, E(1))
    # oracle: every product of e^z terms lands on e^{2z}; (16 - 2 - 64) e^{2z}
    assert r == -50 * E(2)


def test_aux_pair_examples():
    assert aux_pair(EX21) == aux_pair(EX21)
    assert aux_pair(EX21).h == Poly.const(2 * 16 * 64) and aux_pair(EX21).s == Poly.const(-2 * 2 * 64)
    ap = aux_pair(EX22)
    assert ap.h == Poly.const(2016) and ap.s == Poly.const(-72)
    assert aux_pair(build_equation(Shape.E13, 1, 1, 1, Z)).h == Poly.const(2)


def test_theorem1_branch_examples():
    assert theorem1_branch(EX21, E(2) + 2) is Branch.CaseI
    assert theorem1_branch(EX22, 2 * E(3)) is Branch.CaseII_or_III
    assert theorem1_branch(EX21, ExpPoly.coerce(5)) is Branch.CaseI
    with pytest.raises(ShapeMismatch):
        theorem1_branch(build_equation(Shape.E14, 1, 1, 1, Z), E(1))


# -- properties -----------------------------------------------------------------

nz_poly = polys(3).filter(lambda p: not p.is_zero())
exp_poly = polys(3).filter(lambda p: not p.is_constant())


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([Shape.E12, Shape.E13, Shape.E14]), nz_poly, nz_poly, nz_poly, nz_poly, exp_poly, exppolys())
def test_residual_is_affine_in_c(shape, a, b, c, c2, d, f):
    eq = build_equation(shape, a, b, c, d)
    lhs = residual(eq, f) - residual(eq.with_c(c2), f)
    assert lhs == ExpPoly.term(c2 - c, 2 * eq.d) * eq.rhs_unit


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_e11_embedding_matches_direct_residual(seed):
    rng = random.Random(seed)
    gen, labels = CLOSED_FORM_CASES["ThmA.2"]
    eq = gen(rng)
    tau, mu, lam = eq.b.constant_term(), eq.c.constant_term(), eq.d.coeff(1)
    fam = classify(eq).by_provenance("ThmA.2")[0]
    for bindings in random_bindings(fam, rng):
        f = instantiate_family(fam, bindings)
        f1 = f.derivative()
        direct = f * f1.derivative() - ExpPoly.coerce(tau) * f1 * f1 - mu * exp_of(2 * lam * Z)
        assert residual(eq, f) == direct
        assert direct.is_zero()


@settings(max_examples=200, deadline=None)
@given(nz_poly, nz_poly, nz_poly, exp_poly)
def test_aux_pair_never_vanishes(a, b, c, d):
    eq = build_equation(Shape.E13, a, b, c, d)
    ap = aux_pair(eq)
    assert not ap.h.is_zero() and not ap.s.is_zero()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(CLOSED_FORM_CASES)), st.integers(0, 10**6))
def test_verified_instances_balance_numerically(case, seed):
    rng = random.Random(seed)
    gen, labels = CLOSED_FORM_CASES[case]
    eq = gen(rng)
    fams = classify(eq).by_provenance(labels[0])
    fam = fams[0]
    f = instantiate_family(fam, random_bindings(fam, rng)[0])
    assert verify(eq, f)
    units = {"e": lambda: mpmath.e}
    for _ in range(5):
        z0 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        with mpmath.workprec(160):
            lhs = eq.lhs(f).eval(z0, 80, units)
            rhs = eq.rhs().eval(z0, 80, units)
            assert (lhs - rhs).contains(0)
