"""Forms for equations whose coefficient product ``a*b*c`` vanishes."""
from __future__ import annotations

from ..equation import BinomialEquation, Shape, residual
from ..errors import CapabilityExceeded, EmptyAnsatz, MultipleDegeneracies
from ..exppoly import ExpPoly, Poly
from ..scalar import Scalar
from .ansatz import solve_generic, unit_free
from .families import Classification, SolutionFamily, Status, free

DEFAULT_BOUND = 2


def degenerate_classify(eq: BinomialEquation, degree_bound: int | None = None) -> Classification:
    """Remark forms when exactly one of ``a``, ``b``, ``c`` vanishes identically.

    Reduced polynomial constraints are solved by a low-degree ansatz
    (``degree_bound`` defaults to 2).
    """
    bound = DEFAULT_BOUND if degree_bound is None else degree_bound
    zero = [n for n, p in (("a", eq.a), ("b", eq.b), ("c", eq.c)) if p.is_zero()]
    if len(zero) >= 2:
        raise MultipleDegeneracies(f"{', '.join(zero)} vanish identically")
    if not zero:
        raise ValueError("equation is not degenerate")
    out = Classification()
    if eq.shape is Shape.E12:
        out.notes.append("no degenerate classification is available for this shape")
        return out
    eq1, h = unit_free(eq)
    a, b, C, d = eq1.a, eq1.b, eq1.C, eq1.d
    which = zero[0]
    label = f"Rem.{eq.shape.value}.{which}0"
    if which == "c":
        fam = SolutionFamily(label, ExpPoly.term(Scalar.unit("R")), [free("R"), free("P")],
                             Status.AnsatzOnly, note="f = R*exp(P) with R, P polynomials (form only)")
        out.append(fam)
        return out

    # (order of the derivative carrying R e^d, reduced constraint on R)
    if eq.shape is Shape.E13 and which == "a":
        order, constraint = 2, lambda R: ExpPoly.coerce(-(b * R * R) - C)
        text = "R^2 = -c/b"
    elif eq.shape is Shape.E13:
        order, constraint = 0, lambda R: residual(eq1, ExpPoly.term(R, d))
        text = "a*R*(R'+R*d') = c"
    elif which == "a":
        order, constraint = 0, lambda R: residual(eq1, ExpPoly.term(R, d))
        text = "R^2 = -c/b"
    else:
        order, constraint = 1, lambda R: ExpPoly.coerce(a * R * (R.derivative() + R * d.derivative()) - C)
        text = "a*R*(R'+R*d') = c"
    try:
        sols = solve_generic(constraint, bound)
    except (EmptyAnsatz, CapabilityExceeded) as exc:
        out.notes.append(f"{label}: {exc}")
        sols = []
    for s in sols:
        form = ExpPoly.term(s.poly, d) * h
        params = [free(n, nonzero=False) for n in s.free]
        fam = SolutionFamily(label, form, params, derivative_order=order, note=f"R satisfies {text} exactly")
        if order == 0:
            if not all(residual(eq, f).is_zero() for _, f in fam.instances()):
                out.notes.append(f"{label}: candidate rejected because its residual does not vanish")
                continue
            fam.status = Status.ParametricVerified if params else Status.VerifiedExact
        else:
            fam.status = Status.AnsatzOnly
        out.append(fam)
    if not sols:
        out.append(SolutionFamily(label, ExpPoly.term(Poly.const(Scalar.unit("R")), d) * h, [free("R")],
                                  Status.AnsatzOnly, derivative_order=order, note=f"R polynomial with {text}"))
    return out
