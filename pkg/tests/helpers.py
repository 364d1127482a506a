"""Shared generators for the test suites."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from binomial_ode import ExpPoly, Poly, Scalar, Shape, Z, build_equation, exp_of
from binomial_ode.classifier import Kind, Status, classify, instantiate_family
from binomial_ode.equation import verify
from binomial_ode.scalar import omega_tower, tower_extend

W_TOWER, W = omega_tower()
R_TOWER = tower_extend(W_TOWER, [Fraction(-2, 3), 0, 0, 1], (0.8736, 0.01), name="r")

# -- hypothesis strategies ------------------------------------------------------

small_int = st.integers(-9, 9)
nonzero_int = st.integers(-9, 9).filter(bool)
rationals = st.builds(Fraction, st.integers(-100, 100), st.integers(1, 100))


@st.composite
def tower_scalars(draw, tower=R_TOWER):
    """Random element of ``tower`` with numerators at most 100."""
    basis = tower.basis()
    s = Scalar(0)
    for mono in draw(st.lists(st.sampled_from(basis), min_size=1, max_size=4)):
        c = draw(rationals)
        term = Scalar(c)
        for i, e in enumerate(mono):
            term = term * tower.gen(i) ** e
        s = s + term
    return s


@st.composite
def polys(draw, max_degree=2, coeff=rationals):
    n = draw(st.integers(0, max_degree))
    return Poly([Scalar(draw(coeff)) for _ in range(n + 1)])


@st.composite
def exponents(draw, max_degree=2):
    """Exponent polynomial with zero constant term."""
    n = draw(st.integers(0, max_degree))
    return Poly([Scalar(0)] + [Scalar(draw(small_int)) for _ in range(n)])


@st.composite
def exppolys(draw, max_terms=3, exp_degree=2, coeff_degree=2):
    f = ExpPoly()
    for _ in range(draw(st.integers(1, max_terms))):
        f = f + ExpPoly.term(draw(polys(coeff_degree, st.integers(-5, 5).map(Fraction))), draw(exponents(exp_degree)))
    return f


# -- closed-form case generators ----------------------------------------------------

def _q(rng: random.Random, lo=-6, hi=6, nonzero=True) -> Fraction:
    while True:
        v = Fraction(rng.randint(lo, hi), rng.randint(1, 4))
        if v or not nonzero:
            return v


def _gen_thmA2(rng):
    tau = _q(rng)
    while tau == 1:
        tau = _q(rng)
    return build_equation(Shape.E11, tau, _q(rng), _q(rng) * Z)


def _gen_thmA3(rng):
    return build_equation(Shape.E11, 1, _q(rng), Poly([0, _q(rng, nonzero=False), _q(rng)]))


def _gen_thmA4(rng):
    return build_equation(Shape.E11, 1, _q(rng), _q(rng) * Z)


def _gen_thmB_i1(rng):
    a = _q(rng)
    b = _q(rng)
    while b == a:
        b = _q(rng)
    return build_equation(Shape.E12, a, b, _q(rng), _q(rng) * Z)


def _gen_thmB_i2(rng):
    a = _q(rng)
    return build_equation(Shape.E12, a, a, _q(rng), Poly([0, _q(rng, nonzero=False), _q(rng)]))


def _gen_thmB_equal(rng):
    a = _q(rng)
    return build_equation(Shape.E12, a, a, _q(rng) * a, _q(rng) * Z)


def _gen_thm1(relation):
    def gen(rng):
        b, lam = _q(rng), _q(rng)
        if relation == "ii31":
            a = _q(rng)
            while a == b * lam**3:
                a = _q(rng)
        else:
            a = {"ii2": -2, "ii32": -8, "ii33": -8}[relation] * b * lam**3
        return build_equation(Shape.E13, a, b, _q(rng), lam * Z)

    return gen


def _gen_thm2(relation):
    def gen(rng):
        a, lam = _q(rng), _q(rng)
        if relation == "ii1":
            b = _q(rng)
            while b == a * lam**3:
                b = _q(rng)
        else:
            b = {"ii2": Fraction(-1, 8), "ii3": -8}[relation] * a * lam**3
        return build_equation(Shape.E14, a, b, _q(rng), lam * Z)

    return gen


# case name -> (generator, provenance labels that must appear)
CLOSED_FORM_CASES = {
    "ThmA.2": (_gen_thmA2, ("ThmA.2",)),
    "ThmA.3": (_gen_thmA3, ("ThmA.3",)),
    "ThmA.4": (_gen_thmA4, ("ThmA.4a", "ThmA.4b", "ThmA.4c")),
    "ThmB.i1": (_gen_thmB_i1, ("ThmB.i1",)),
    "ThmB.i2": (_gen_thmB_i2, ("ThmB.i2",)),
    "ThmB.i3": (_gen_thmB_equal, ("ThmB.i3",)),
    "ThmB.ii1": (_gen_thmB_equal, ("ThmB.ii1",)),
    "ThmB.iii": (_gen_thmB_equal, ("ThmB.iii",)),
    "Thm1.ii2": (_gen_thm1("ii2"), ("Thm1.ii2",)),
    "Thm1.ii31": (_gen_thm1("ii31"), ("Thm1.ii31",)),
    "Thm1.ii32": (_gen_thm1("ii32"), ("Thm1.ii32",)),
    "Thm1.ii33": (_gen_thm1("ii33"), ("Thm1.ii33",)),
    "Thm2.ii1": (_gen_thm2("ii1"), ("Thm2.ii1",)),
    "Thm2.ii2": (_gen_thm2("ii2"), ("Thm2.ii2",)),
    "Thm2.ii3": (_gen_thm2("ii3"), ("Thm2.ii3",)),
}


def random_bindings(family, rng: random.Random) -> list[dict]:
    """One binding per solved branch, free parameters set to small admissible integers."""
    out = []
    for branch in family.branches():
        bindings = dict(branch)
        for p in family.parameters:
            if p.kind is not Kind.FREE:
                continue
            while True:
                v = Scalar(rng.choice([-3, -2, -1, 1, 2, 3, Fraction(1, 2), Fraction(-5, 3)]))
                if all(not (v - ex.subs(bindings)).is_zero() for ex in p.excluded):
                    break
            bindings[p.name] = v
        for p in family.parameters:
            if p.kind is Kind.DERIVED:
                bindings.pop(p.name, None)
        out.append(bindings)
    return out


def roundtrip_case(case: str, rng: random.Random) -> tuple[int, int]:
    """Generate one instance of ``case``; return (verified instantiations, attempted)."""
    gen, labels = CLOSED_FORM_CASES[case]
    eq = gen(rng)
    result = classify(eq, degree_bound=2)
    ok = total = 0
    for label in labels:
        fams = [f for f in result.by_provenance(label) if f.status is not Status.AnsatzOnly]
        if not fams:
            total += 1  # a missing family counts as a failure
            continue
        for fam in fams:
            for bindings in random_bindings(fam, rng):
                total += 1
                ok += verify(eq, instantiate_family(fam, bindings))
    return ok, total
