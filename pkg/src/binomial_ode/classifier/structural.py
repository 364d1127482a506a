"""Degree, constancy and orientation checks derived from the equation alone."""
from __future__ import annotations

from ..equation import BinomialEquation, Shape, verify
from ..errors import CapabilityExceeded
from ..exppoly import ExpPoly, Poly, gcd
from .families import Diagnostic
from .solve import nth_roots


def _deg(p: Poly):
    return p.degree if not p.is_zero() else "-inf"


def has_simple_pole(num: Poly, den: Poly) -> bool:
    """Whether ``num/den`` (in lowest terms) has a pole of order exactly one."""
    q = den.exact_div(gcd(num, den))
    if q is None or q.degree < 1:
        return False
    m = gcd(q, q.derivative())
    if m.degree < 1:
        return True
    radical = q.exact_div(m)
    repeated = m.exact_div(gcd(m, m.derivative())) if m.degree >= 1 else Poly.const(1)
    return radical.degree > repeated.degree


def orientation_quantities(eq: BinomialEquation) -> tuple[Poly, Poly]:
    """``(M, Mt)`` with ``M = b - a d' d'' - a (d')^3`` and ``Mt = -M``."""
    d1 = eq.d.derivative()
    M = eq.b - eq.a * d1 * d1.derivative() - eq.a * d1 * d1 * d1
    return M, -M


def _e12_checks(eq: BinomialEquation) -> list[Diagnostic]:
    a, b, c, d = eq.a, eq.b, eq.c, eq.d
    s = a - b
    out = []
    if a.degree >= 1 and not s.is_zero():
        out.append(Diagnostic(
            "ThmB.hypothesis",
            "b/a has at least one simple pole",
            f"b/a = ({b.text()})/({a.text()})",
            has_simple_pole(b, a),
        ))
    else:
        out.append(Diagnostic("ThmB.hypothesis", "b/a has at least one simple pole", "not required", None))
    if not s.is_zero():
        k = d.degree
        want = a.degree - 2 if k == 1 else a.degree - k
        ok = a.degree == b.degree and a.degree >= 2 and s.degree == want
        out.append(Diagnostic(
            "ThmB.ii2.degrees",
            f"deg(a)=deg(b)>=2 and deg(a-b)=deg(a)-{2 if k == 1 else 'k'} (k=deg d={k})",
            f"deg(a)={_deg(a)}, deg(b)={_deg(b)}, deg(a-b)={_deg(s)}",
            ok,
        ))
    return out


def _e13_checks(eq: BinomialEquation) -> list[Diagnostic]:
    a, b, c, d = eq.a, eq.b, eq.c, eq.d
    out = []
    if not (a.is_constant() and b.is_constant() and c.is_constant() and d.degree == 1):
        return out
    A, B, lam = a.constant_term(), b.constant_term(), d.coeff(1)
    corrected = A == B * lam**3 * 8
    out.append(Diagnostic(
        "Thm1.i.constant-c",
        "a = 8*b*lambda^3 (lambda = d')",
        f"a = {A.text()}, 8*b*lambda^3 = {(B * lam**3 * 8).text()}",
        corrected,
    ))
    stated = A == B * 8
    out.append(Diagnostic(
        "Thm1.i.stated-condition",
        "a = 8*b and (d')^2 = c1",
        f"a = {A.text()}, 8*b = {(B * 8).text()}, lambda = {lam.text()}",
        stated == corrected,
    ))
    den = B * lam**3 * 4 + A
    via_lambda = (not den.is_zero()) and lam == -(A * lam) * den.inverse()
    via_a = A == -(B * lam**3 * 2)
    out.append(Diagnostic(
        "Thm1.ii2.consistency",
        "lambda = -a*d'/(4*b*(d')^3+a) agrees with a = -2*b*(d')^3",
        f"lambda formula holds: {via_lambda}; a = -2*b*(d')^3 holds: {via_a}",
        via_lambda == via_a,
    ))
    return out


def _e14_checks(eq: BinomialEquation) -> list[Diagnostic]:
    a, b, c, d = eq.a, eq.b, eq.c, eq.d
    d1 = d.derivative()
    out = []
    if all(p.is_constant() for p in (a, b, c, d1)):
        return out
    name = "Thm2.i22.M-orientation"
    if not c.is_constant():
        out.append(Diagnostic(name, "P^2*Mt = c", "skipped: c non-constant", None))
        return out
    if d1.is_constant():
        if not (a.is_constant() and b.is_constant()):
            out.append(Diagnostic(
                "Thm2.i21.degrees", "deg(a) = deg(b)",
                f"deg(a)={_deg(a)}, deg(b)={_deg(b)}", a.degree == b.degree,
            ))
        out.append(Diagnostic(name, "P^2*Mt = c", "skipped: d' constant", None))
        return out
    M, Mt = orientation_quantities(eq)
    if Mt.is_zero():
        out.append(Diagnostic(name, "M nonzero", "M = 0", False))
        return out
    if not Mt.is_constant():
        want = a.degree + 2 * d.degree - 3
        out.append(Diagnostic(
            "Thm2.i22-2.degree", "deg(M) = deg(a) + 2*deg(d) - 3",
            f"deg(M)={M.degree}, deg(a)+2*deg(d)-3={want}", M.degree == want,
        ))
        return out
    m_t = Mt.constant_term()
    C = eq.C.constant_term()
    p2 = C * m_t.inverse()
    try:
        roots, _ = nth_roots(p2, 2)
        proof_ok = bool(roots) and all(verify(eq, ExpPoly.term(Poly.const(r), d)) for r in roots)
        found = ", ".join(r.text() for r in roots)
    except CapabilityExceeded as exc:
        proof_ok, found = False, f"no exact root ({exc})"
    out.append(Diagnostic(
        "Thm2.i22-1.proof-orientation",
        "P^2*Mt = c with Mt = a*d'*d''+a*(d')^3-b",
        f"Mt = {m_t.text()}, P^2 = {p2.text()}, P in {{{found}}}, residual zero: {proof_ok}",
        proof_ok,
    ))
    lhs = p2 * M.constant_term()
    out.append(Diagnostic(
        "Thm2.i22-1.statement-orientation",
        "P^2*M = c with M = b-a*d'*d''-a*(d')^3",
        f"M = {M.constant_term().text()}, P^2*M = {lhs.text()}, c = {C.text()}",
        lhs == C,
    ))
    return out


def structural_checks(eq: BinomialEquation) -> list[Diagnostic]:
    if eq.degenerate:
        return []
    if eq.shape is Shape.E12:
        return _e12_checks(eq)
    if eq.shape is Shape.E13:
        return _e13_checks(eq)
    return _e14_checks(eq)
