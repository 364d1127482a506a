"""One test per acceptance criterion; each prints a PASS/FAIL line in the session summary."""
import math
import random
import time
from fractions import Fraction

import mpmath

from binomial_ode import ExpPoly, Poly, Scalar, Shape, Z, build_equation, exp_of, residual, verify
from binomial_ode.classifier import classify, instantiate_family, polynomial_ansatz, structural_checks
from binomial_ode.frontend import check_record, load_corpus
from binomial_ode.frontend.cli import run
from binomial_ode.nevanlinna import characteristic, count_zeros, estimate_growth, proximity
from binomial_ode.scalar import tower_extend

from helpers import CLOSED_FORM_CASES, W, W_TOWER, random_bindings, roundtrip_case


def test_1_golden_corpus(acceptance):
    start = time.perf_counter()
    outcomes = [check_record(rec) for rec in load_corpus()]
    elapsed = time.perf_counter() - start
    examples = [o for o in outcomes if o["id"] in {f"ex2.{k}" for k in range(1, 9)}]
    ok = (len(examples) == 8 and all(o["observed"] == "Valid" and o["residual"] == "0" for o in examples)
          and all(o["passed"] for o in outcomes) and elapsed < 1.0)
    acceptance(1, "golden corpus verifies exactly", ok, f"{len(examples)}/8 examples zero residual, {elapsed:.2f} s")
    assert ok


def test_2_discrepancies(acceptance):
    code, report = run(["verify", "--record", "ex2.7-prose"])
    prose_ok = code == 1 and report["residual"] == "4*exp(4*z)"
    prose = build_equation(Shape.E14, 3, 1, 88, 2 * Z)
    prose_ok &= residual(prose, 2 * exp_of(2 * Z)) == 4 * exp_of(4 * Z)

    a, b, c, d = Poly.const(2), 16 * Z**3 + 24 * Z**2 + 20 * Z + 7, Poly.const(-9), Z**2 + Z
    d1, d2 = d.derivative(), d.derivative().derivative()
    m_tilde = a * d1 * d2 + a * d1 * d1 * d1 - b  # independent recomputation
    diags = {x.name: x.to_record() for x in structural_checks(build_equation(Shape.E14, a, b, c, d))}
    proof = diags["Thm2.i22-1.proof-orientation"]
    sign_ok = (m_tilde == Poly.const(-1) and Poly.const(9) * m_tilde == c
               and proof["pass"] is True and "Mt = -1" in proof["observed"]
               and diags["Thm2.i22-1.statement-orientation"]["pass"] is False)
    ok = prose_ok and sign_ok
    acceptance(2, "known discrepancies detected", ok,
               f"prose residual {report['residual']} exit {code}; Mt = {m_tilde.text()}")
    assert ok


def test_3_classification_round_trip(acceptance):
    start = time.perf_counter()
    failures = {}
    attempted = 0
    for case in CLOSED_FORM_CASES:
        rng = random.Random(f"roundtrip-{case}")
        for _ in range(100):
            ok, total = roundtrip_case(case, rng)
            attempted += total
            if ok != total:
                failures[case] = failures.get(case, 0) + total - ok
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 30.0
    acceptance(3, "classification round trip", ok,
               f"{len(CLOSED_FORM_CASES)} cases x 100 instances, {attempted} instantiations, "
               f"failures {failures or 0}, {elapsed:.1f} s")
    assert ok


def _random_poly(rng, degree):
    return Poly([Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(degree)] + [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))])


def test_4_polynomial_ansatz(acceptance):
    eq24 = build_equation(Shape.E14, 3 * Z + 4, 8 * (3 * Z + 4), 4 * (3 * Z + 4) ** 2, 2 * Z)
    eq25 = build_equation(Shape.E14, 1, 2 * Z, 8 * Z**3 + 2 * Z, Z**2)
    ok = {s.poly for s in polynomial_ansatz(eq24, 3)} == {Z + 1, -(Z + 1)}
    ok &= {s.poly for s in polynomial_ansatz(eq25, 3)} == {Poly.const(1), Poly.const(-1)}

    rng = random.Random("ansatz")
    recovered = trials = 0
    while trials < 20:
        P = _random_poly(rng, rng.randint(0, 3))
        a, b = _random_poly(rng, rng.randint(0, 2)), _random_poly(rng, rng.randint(0, 2))
        d = Poly([0, Fraction(rng.choice([-2, -1, 1, 2])), Fraction(rng.randint(-1, 1))])
        d1, d2 = d.derivative(), d.derivative().derivative()
        P1, P2 = P.derivative(), P.derivative().derivative()
        # f = P e^d gives f' = (P' + P d') e^d and f'' = (P'' + 2P'd' + P d'' + P d'^2) e^d
        c = a * (P1 + P * d1) * (P2 + 2 * P1 * d1 + P * d2 + P * d1 * d1) - b * P * P
        if c.is_zero() or c.is_constant():
            continue
        trials += 1
        eq = build_equation(Shape.E14, a, b, c, d)
        assert verify(eq, ExpPoly.term(P, d))
        recovered += P in {s.poly for s in polynomial_ansatz(eq, 3)}
    ok &= recovered == trials
    acceptance(4, "polynomial ansatz recovers P", ok, f"examples 2.4/2.5 and {recovered}/{trials} random instances")
    assert ok


def test_5_cube_root_tower(acceptance):
    rng = random.Random("cube-roots")
    verified = via_classifier = 0
    for k in range(20):
        q = Fraction(rng.choice([-1, 1]) * rng.randint(1, 60), rng.randint(1, 12))
        real_root = math.copysign(abs(q) ** (1 / 3), q)
        tower = tower_extend(W_TOWER, [-q, 0, 0, 1], (real_root, 0.1 * abs(real_root)), name="t")
        t1 = tower.gen("t")
        t2 = W * t1
        b = Scalar(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)))
        c1, c2 = Scalar(rng.choice([-2, -1, 1, 2, 3])), Scalar(rng.choice([-2, -1, 1, 2, 3]))
        # relation solved for c with c3 = 0
        c = b * c1 * c2 * t1 * t1 * (t1 - t2) * (t1 + 2 * t2)
        lam = (t1 + t2) / 2
        eq = build_equation(Shape.E13, b * q, b, Poly.const(c), lam * Z)
        f = exp_of(t1 * Z, c1) + exp_of(t2 * Z, c2)
        verified += verify(eq, f)
        fams = classify(eq).by_provenance("Thm1.ii33")
        via_classifier += bool(fams) and all(
            verify(eq, instantiate_family(fam, bnd)) for fam in fams for bnd in random_bindings(fam, rng))
    ok = verified == 20 and via_classifier == 20
    acceptance(5, "cube-root tower instances verify", ok,
               f"{verified}/20 direct, {via_classifier}/20 recovered by the classifier")
    assert ok


def test_6_nevanlinna_numerics(acceptance):
    start = time.perf_counter()
    e = lambda k: exp_of(k * Z)  # noqa: E731
    m = proximity(e(1), r=20, nodes=2048)
    prox_err = abs(math.pi * m / 20 - 1)
    rho = estimate_growth(exp_of(Z**2)).rho_hat
    zeros = count_zeros(e(1) - 1, 20)
    worst = 0.0
    for rec in load_corpus():
        if rec.expected != "Valid":
            continue
        eq, f = rec.parse()
        for r in (5, 10, 20):
            ratio = characteristic(exp_of(2 * eq.d), r).T / characteristic(f, r).T
            worst = max(worst, ratio)
    elapsed = time.perf_counter() - start
    ok = prox_err < 1e-3 and 1.95 <= rho <= 2.05 and zeros == 7 and worst <= 2.1 and elapsed < 60
    acceptance(6, "Nevanlinna numerics", ok,
               f"|pi m/20 - 1| = {prox_err:.1e}, rho(e^(z^2)) = {rho:.4f}, zeros = {zeros}, "
               f"max T(e^2d)/T(f) = {worst:.3f}, {elapsed:.1f} s")
    assert ok


def _kernel_sample(rng):
    f = ExpPoly()
    for _ in range(rng.randint(1, 3)):
        coeff = Poly([Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, 3))])
        exponent = Poly([0] + [Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(0, 2))])
        f = f + ExpPoly.term(coeff, exponent)
    return f


def test_7_kernel_algebra(acceptance):
    violations = {"leibniz": 0, "associativity": 0, "distributivity": 0, "canonical": 0}
    for seed in range(100):
        rng = random.Random(seed)
        f, g, h = _kernel_sample(rng), _kernel_sample(rng), _kernel_sample(rng)
        violations["leibniz"] += (f * g).derivative() != f.derivative() * g + f * g.derivative()
        violations["associativity"] += (f * g) * h != f * (g * h) or (f + g) + h != f + (g + h)
        violations["distributivity"] += f * (g + h) != f * g + f * h
        x, y = f * (g + h) - g * h, (h * f - h * g) + g * f
        violations["canonical"] += x.terms != y.terms or x.text() != y.text()
    ok = not any(violations.values())
    acceptance(7, "kernel algebra property suites", ok,
               "100 seeds, violations " + ", ".join(f"{k} {v}" for k, v in violations.items()))
    assert ok
