import math

import mpmath
import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from binomial_ode import ExpPoly, Poly, Shape, Z, build_equation, exp_of
from binomial_ode.errors import ContourThroughZero, PoleOnCircle, ZeroFunction
from binomial_ode.frontend import load_corpus
from binomial_ode.nevanlinna import (
    DEFAULT_R_GRID, GrowthFit, N_of, characteristic, count_zeros, estimate_growth, mean_log_abs,
    proximity, sample_record, samples_to_csv, small_function_score, zero_moduli,
)

E = lambda k: exp_of(k * Z)  # noqa: E731


def _quad_log_plus(fn, r):
    """Independent oracle: adaptive quadrature of log+|f(r e^{it})| / 2pi."""
    g = lambda t: max(0, mpmath.log(abs(fn(r * mpmath.expj(t)))))  # noqa: E731
    return float(mpmath.quad(g, mpmath.linspace(0, 2 * mpmath.pi, 65)) / (2 * mpmath.pi))


def test_proximity_of_exp():
    m = proximity(E(1), r=20, nodes=2048)
    assert abs(math.pi * m / 20 - 1) < 1e-3


def test_proximity_of_gaussian_type():
    m = proximity(exp_of(Z**2), r=5)
    assert abs(m - 25 / math.pi) < 1e-3


def test_proximity_of_one():
    assert proximity(ExpPoly.coerce(1), r=7) == 0.0


def test_proximity_of_quotient():
    # m(r, e^z / e^{2z}) = m(r, e^{-z}) = r/pi
    assert abs(proximity(E(1), E(2), r=10) - 10 / math.pi) < 1e-3


def test_pole_on_circle_is_perturbed_then_reported():
    # e^z - 1 vanishes at 2*pi*i, a node of every uniform grid on |z| = 2*pi
    assert math.isfinite(proximity(1, E(1) - 1, r=2 * math.pi))
    with pytest.raises(PoleOnCircle):
        proximity(1, ExpPoly(), r=1)


def test_count_zeros_examples():
    assert count_zeros(E(1) - 1, 20) == 7
    assert count_zeros(E(1), 3) == 0 and count_zeros(E(1), 17) == 0
    # oracle: zeros of e^{6z} = -2 are (log 2 + i*pi*(2k+1))/6
    expected = sum(1 for k in range(-40, 40) if abs(complex(math.log(2), math.pi * (2 * k + 1)) / 6) <= 10)
    assert count_zeros(E(2) + 2 * E(-4), 10) == expected > 0


def test_count_zeros_errors():
    with pytest.raises(ContourThroughZero):
        count_zeros(E(1) - 1, 2 * math.pi)
    with pytest.raises(ZeroFunction):
        count_zeros(ExpPoly(), 1)


def test_zero_moduli_and_counting_function():
    moduli = zero_moduli(E(1) - 1, 20)
    truth = sorted([0.0] + [2 * math.pi * abs(k) for k in range(-3, 4) if k])
    assert len(moduli) == 7
    # a bisection probe too close to a zero stops refinement, which caps accuracy near 1e-3 relative
    assert moduli[0] < 1e-3
    assert np.allclose(moduli[1:], truth[1:], rtol=1e-3)
    # Jensen oracle: N(r, 1/f) = mean log|f| - log|f(0)| for f(0) != 0
    f = E(2) + 2
    assert abs(N_of(f, 10) - (mean_log_abs(f, 10) - math.log(3))) < 1e-3


def test_characteristic_examples():
    s = characteristic(E(1), 20, nodes=2048)
    assert abs(s.T - 20 / math.pi) < 1e-3 and s.N == 0 and s.T == s.m
    s = characteristic(ExpPoly.coerce(Z**3), math.e)
    assert abs(s.T - 3) < 1e-6


def test_characteristic_with_constant_background():
    s = characteristic(E(2) + 2, 10)
    oracle = _quad_log_plus(lambda z: mpmath.exp(2 * z) + 2, 10)
    assert abs(s.T - oracle) < 1e-3
    # dominant term r*2/pi plus log 2 on the half circle where the constant wins
    approx = 20 / math.pi + math.log(2) / 2
    assert abs(s.T - approx) <= 0.05 * approx


def test_growth_of_gaussian_type():
    fit = estimate_growth(exp_of(Z**2))
    assert 1.95 <= fit.rho_hat <= 2.05
    assert fit.lambda_hat == 0.0


def test_growth_with_zeros_on_a_line():
    fit = estimate_growth(E(2) + 2)
    assert 0.95 <= fit.rho_hat <= 1.05
    assert 0.9 <= fit.lambda_hat <= 1.1
    # fit tolerance: the widths of the two accepted windows above
    assert fit.rho_hat >= fit.lambda_hat - 0.15


def test_growth_with_one_zero():
    fit = estimate_growth((Z + 1) * E(2))
    assert fit.lambda_hat == 0.0
    assert 0.9 <= fit.rho_hat <= 1.05


def test_growth_needs_a_decade():
    with pytest.raises(ValueError):
        estimate_growth(E(1), [2, 3, 4, 5, 6])
    with pytest.raises(ValueError):
        estimate_growth(E(1), [2, 30])


def test_records_and_csv():
    samples = [characteristic(E(1), r) for r in (2.0, 4.0)]
    text = samples_to_csv(samples)
    assert text.splitlines()[0] == "r,m,N,T,error_bound"
    assert len(text.splitlines()) == 3
    rec = sample_record(samples[0])
    assert set(rec) == {"r", "m", "N", "T", "quad_nodes", "error_bound"}
    assert set(GrowthFit(1.0, 0.0, (1.0,), 0.0).to_record()) >= {"rho_hat", "lambda_hat", "residual"}


def test_small_function_score_is_bounded():
    eq = build_equation(Shape.E13, 28, 1, 12, 3 * Z)
    score = small_function_score(eq, 2 * E(3), r_grid=(2, 4, 8, 16, 20))
    assert 0.0 <= score <= 1.0


# -- properties -----------------------------------------------------------------

linear_exppolys = st.lists(
    st.tuples(st.integers(-4, 4).filter(bool), st.integers(-3, 3)), min_size=1, max_size=3
).map(lambda ts: sum((c * E(k) for c, k in ts), ExpPoly()))


@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(linear_exppolys)
def test_jensen_consistency(f):
    assume(not f.is_constant())
    f0 = abs(complex(f.eval(0).mid))
    assume(f0 > 1e-9)
    r = 3.0
    s = characteristic(f, r)
    m_inv, _, err_inv = proximity(1, f, r, with_error=True)
    # first main theorem: T(r, f) = m(r, 1/f) + N(r, 1/f) + log|f(0)|
    n_val, err_n = N_of(f, r, with_error=True)
    rebuilt = m_inv + n_val + math.log(f0)
    assert abs(s.T - rebuilt) <= 2 * (s.error_bound + err_inv + err_n)


@settings(max_examples=10, deadline=None)
@given(st.integers(-5, 5).filter(bool), st.integers(-3, 3), st.integers(-2, 2))
def test_first_main_theorem_spread_for_zero_free(c, l1, l2):
    assume(l1 or l2)
    f = c * exp_of(Poly([0, l1, l2]))
    diffs = [characteristic(f, r).T - proximity(1, f, r) for r in (2, 4, 8, 16)]
    assert max(diffs) - min(diffs) <= 1.0


@settings(max_examples=10, deadline=None)
@given(linear_exppolys)
def test_characteristic_is_monotone(f):
    samples = [characteristic(f, r) for r in (1.0, 2.0, 4.0, 8.0, 16.0)]
    for s1, s2 in zip(samples, samples[1:]):
        assert s1.T <= s2.T + s1.error_bound + s2.error_bound + 1e-9


@pytest.mark.parametrize("rec", [r for r in load_corpus() if r.expected == "Valid"], ids=lambda r: r.id)
def test_exponential_factor_bounded_by_solution(rec):
    eq, f = rec.parse()
    e2d = exp_of(2 * eq.d)
    for r in (5, 10, 20):
        assert characteristic(e2d, r).T <= 2.1 * characteristic(f, r).T
