"""Case trees producing verified solution families for each equation shape."""
from __future__ import annotations

from fractions import Fraction

from ..equation import BinomialEquation, Shape
from ..errors import CapabilityExceeded, EmptyAnsatz
from ..exppoly import ExpPoly, Poly, Z
from ..scalar import Scalar, omega_tower
from .ansatz import MAX_DEGREE_BOUND, shape_constraint, solve_generic, unit_free
from .families import (
    Classification,
    Diagnostic,
    Parameter,
    SolutionFamily,
    Status,
    derived,
    free,
    solved,
)
from .solve import coefficients_in, lift, nth_roots, univariate_roots, wider
from .structural import has_simple_pole, structural_checks

E12_LABELS = {"i": "ThmB.i", "i1": "ThmB.i1", "i2": "ThmB.i2", "i3": "ThmB.i3",
              "ii1": "ThmB.ii1", "ii2": "ThmB.ii2", "iii": "ThmB.iii"}
E11_LABELS = {"i": "ThmA.1", "i1": "ThmA.2", "i2": "ThmA.3", "i3": "ThmA.4a",
              "ii1": "ThmA.4b", "ii2": "ThmA.ii2", "iii": "ThmA.4c"}


def _unit(name: str, k: int = 1) -> Scalar:
    return Scalar.unit(name, k)


def _const(p: Poly) -> Scalar | None:
    return p.constant_term() if p.is_constant() else None


class _Context:
    def __init__(self, eq: BinomialEquation, degree_bound: int, strict: bool):
        self.eq = eq
        self.eq1, self.h = unit_free(eq)
        self.tower = eq.tower
        self.degree_bound = degree_bound
        self.strict = strict
        self.out = Classification()

    def note(self, text: str) -> None:
        self.out.notes.append(text)

    def diag(self, name, expected, observed, passed) -> None:
        self.out.diagnostics.append(Diagnostic(name, expected, observed, passed))

    def solve_param(self, name: str, expr: Scalar, nonzero: bool = True) -> Parameter | None:
        """Parameter ``name`` constrained by ``expr = 0`` (univariate in ``name``)."""
        cs = coefficients_in(expr, name)
        try:
            roots, tower = univariate_roots(cs, self.tower)
        except CapabilityExceeded as exc:
            if self.strict:
                raise
            self.note(f"{name}: constraint left unsolved ({exc})")
            return None
        self.tower = wider(self.tower, tower)
        if nonzero:
            roots = [r for r in roots if not r.is_zero()]
        if not roots:
            return None
        top = max(cs)
        relation = sum((c * _unit(name, k) for k, c in cs.items()), Scalar(0)) * cs[top].inverse()
        return solved(name, relation, roots, nonzero)

    def emit(self, provenance: str, form: ExpPoly, params: list[Parameter], note: str = "",
             status: Status | None = None, derivative_order: int = 0) -> SolutionFamily | None:
        form = form * self.h
        fam = SolutionFamily(provenance, form, params, derivative_order=derivative_order, note=note)
        if status is Status.AnsatzOnly:
            fam.status = status
            self.out.append(fam)
            return fam
        if not fam.verify_against(self.eq):
            self.note(f"{provenance}: candidate rejected because its residual does not vanish")
            return None
        fam.status = Status.ParametricVerified if fam.free_names() else Status.VerifiedExact
        self.out.append(fam)
        return fam

    def ansatz(self, provenance: str, description: str) -> None:
        d = self.eq.d
        self.emit(provenance, ExpPoly.term(_unit("P"), d), [free("P")],
                  note=f"P polynomial with {description}", status=Status.AnsatzOnly)
        try:
            sols = solve_generic(shape_constraint(self.eq1), self.degree_bound)
        except EmptyAnsatz as exc:
            self.note(f"{provenance}: {exc}")
            return
        except CapabilityExceeded as exc:
            if self.strict:
                raise
            self.note(f"{provenance}: ansatz incomplete ({exc})")
            return
        for s in sols:
            params = [free(n, nonzero=False) for n in s.free]
            self.emit(provenance, ExpPoly.term(s.poly, d), params,
                      note=f"polynomial ansatz solution of degree {s.degree}")


def _cube_root_pairs(ctx: _Context, ratio: Scalar, lam: Scalar, label: str):
    """Distinct ``t1, t2`` with ``t^3 = ratio`` and ``t1 + t2 = 2*lam``."""
    base = -lam * 2
    if base**3 == ratio:
        tower, w = omega_tower(wider(ctx.tower, base.tower))
        b = lift(base, tower)
        roots = [b, b * w, b * w * w]
    else:
        try:
            roots, tower = nth_roots(ratio, 3, ctx.tower)
        except CapabilityExceeded as exc:
            ctx.diag(label, "t^3 = ratio solvable", str(exc), False)
            return []
    pairs = []
    for i in range(3):
        for j in range(i + 1, 3):
            if roots[i] + roots[j] == lam * 2:
                pairs.append((roots[i], roots[j]))
    if pairs:
        ctx.tower = wider(ctx.tower, tower)
    ctx.diag(label, f"two distinct cube roots of {ratio.text()} summing to 2*lambda = {(lam * 2).text()}",
             f"{len(pairs)} pair(s)", bool(pairs))
    return pairs


# -- equation (1.3) -----------------------------------------------------------

def _thm1_case_i(ctx: _Context) -> None:
    eq = ctx.eq1
    a, b, C, d = eq.a, eq.b, eq.C, eq.d
    d1 = d.derivative()
    g0 = C.exact_div(a)
    if g0 is None:
        ctx.diag("Thm1.i", "c/a polynomial", "c/a is not a polynomial", False)
        return
    g1 = g0.derivative() + g0 * d1 * 2
    H = (b * g1 * g1).exact_div(C)
    if H is None or H.derivative() + H * d1 * 2 != g0:
        ctx.diag("Thm1.i", "H' + 2d'H = c/a with H = b*((c/a)' + 2(c/a)d')^2/c", "fails", False)
        return
    ctx.diag("Thm1.i", "H' + 2d'H = c/a with H = b*((c/a)' + 2(c/a)d')^2/c", f"H = {H.text()}", True)
    v = "v"
    form = ExpPoly.term(H * _unit(v, -1), d * 2) + ExpPoly.term(_unit(v))
    ctx.emit("Thm1.i", form, [free(v)], note="v stands for e^{c2}; the constant c1 is absorbed into H")


def _classify_e13(ctx: _Context) -> None:
    eq = ctx.eq1
    a, b, c, d = eq.a, eq.b, eq.c, eq.d
    _thm1_case_i(ctx)
    A, B, Cc = _const(a), _const(b), _const(eq.C)
    if A is not None and B is not None and Cc is not None and d.degree == 1:
        lam = d.coeff(1)
        e1 = ExpPoly.term(1, lam * Z)
        K = lam * (A - B * lam**3)
        c1 = _unit("c1")
        if not K.is_zero():
            p = ctx.solve_param("c1", c1 * c1 * K - Cc)
            if p:
                ctx.emit("Thm1.ii31", e1 * c1, [p])
        else:
            ctx.diag("Thm1.ii31", "a != b*lambda^3", "a = b*lambda^3", False)
        if A == -(B * lam**3 * 2):
            dl = _unit("delta2")
            p = ctx.solve_param("delta2", dl * dl * (-(B * lam**4 * 3)) - Cc)
            if p:
                ctx.emit("Thm1.ii2", e1 * dl, [p])
        else:
            ctx.diag("Thm1.ii2", "a = -2*b*lambda^3", f"a = {A.text()}, -2*b*lambda^3 = {(-(B * lam**3 * 2)).text()}", False)
        if A == -(B * lam**3 * 8):
            p = ctx.solve_param("c1", c1 * c1 * (-(B * lam**4 * 9)) - Cc)
            if p:
                form = e1 * c1 + ExpPoly.term(_unit("c2"), -lam * 2 * Z)
                ctx.emit("Thm1.ii32", form, [p, free("c2")])
        else:
            ctx.diag("Thm1.ii32", "a = -8*b*lambda^3", f"a = {A.text()}, -8*b*lambda^3 = {(-(B * lam**3 * 8)).text()}", False)
        for t1, t2 in _cube_root_pairs(ctx, A * B.inverse(), lam, "Thm1.ii33"):
            k = B * t1 * t1 * (t1 - t2) * (t1 + t2 * 2)
            c2 = Cc * k.inverse() * _unit("c1", -1)
            form = ExpPoly.term(_unit("c1"), t1 * Z) + ExpPoly.term(_unit("c2"), t2 * Z)
            ctx.emit("Thm1.ii33", form, [free("c1"), derived("c2", c2)],
                     note=f"t1 = {t1.text()}, t2 = {t2.text()}")
    elif not c.is_constant():
        ctx.ansatz("Thm1.ii1", "a*p*(p'+p*d') - b*(p''+2p'd'+p*d''+p*(d')^2)^2 = c")
    else:
        ctx.note("Thm1.ii: c is constant but a, b or d' is not; only case (i) can apply")
    ctx.note("Thm1.iii: no exponential polynomial solutions; the proximity condition is estimated numerically by the nevanlinna module")


# -- equation (1.4) -----------------------------------------------------------

def _classify_e14(ctx: _Context) -> None:
    eq = ctx.eq1
    a, b, c, d = eq.a, eq.b, eq.c, eq.d
    A, B, Cc = _const(a), _const(b), _const(eq.C)
    if A is not None and B is not None and Cc is not None and d.degree == 1:
        lam = d.coeff(1)
        e1 = ExpPoly.term(1, lam * Z)
        c1 = _unit("c1")
        K = A * lam**3 - B
        if not K.is_zero():
            p = ctx.solve_param("c1", c1 * c1 * K - Cc)
            if p:
                ctx.emit("Thm2.ii1", e1 * c1, [p])
        else:
            ctx.diag("Thm2.ii1", "a*lambda^3 != b", "a*lambda^3 = b", False)
        target = -(A * lam**3 * Fraction(1, 8))
        if B == target:
            p = ctx.solve_param("c1", c1 * c1 * (A * lam**3 * Fraction(9, 8)) - Cc)
            if p:
                form = e1 * c1 + ExpPoly.term(_unit("c2"), -lam * Fraction(1, 2) * Z)
                ctx.emit("Thm2.ii2", form, [p, free("c2")])
        else:
            ctx.diag("Thm2.ii2", "b = -a*lambda^3/8", f"b = {B.text()}, -a*lambda^3/8 = {target.text()}", False)
        for t1, t2 in _cube_root_pairs(ctx, B * A.inverse(), lam, "Thm2.ii3"):
            k = A * t1 * (t2 - t1) * (t2 + t1 * 2)
            c2 = Cc * k.inverse() * _unit("c1", -1)
            form = ExpPoly.term(_unit("c1"), t1 * Z) + ExpPoly.term(_unit("c2"), t2 * Z)
            ctx.emit("Thm2.ii3", form, [free("c1"), derived("c2", c2)],
                     note=f"t1 = {t1.text()}, t2 = {t2.text()}")
        return
    d1 = d.derivative()
    if not c.is_constant():
        label = "Thm2.i1"
    elif d1.is_constant():
        label = "Thm2.i21"
    else:
        M = b - a * d1 * d1.derivative() - a * d1**3
        label = "Thm2.i22-1" if M.is_constant() else "Thm2.i22-2"
    ctx.ansatz(label, "(a*P'+a*P*d')*(P''+2P'd'+P*d''+P*(d')^2) - b*P^2 = c")
    ctx.note("Thm2.i3: any other solution satisfies lambda(f) <= rho(f) < infinity (growth bound only)")


# -- equations (1.1) and (1.2) -------------------------------------------------

def _classify_e12(ctx: _Context) -> None:
    eq = ctx.eq1
    labels = E11_LABELS if eq.origin is Shape.E11 else E12_LABELS
    a, b, c, d = eq.a, eq.b, eq.c, eq.d
    C = eq.C
    s = a - b
    if a.degree >= 1 and not s.is_zero() and not has_simple_pole(b, a):
        ctx.note("HypothesisUnmet: b/a has no simple pole; remaining cases are still reported")
    k = d.degree
    alpha = _unit("alpha")
    S, Cc = _const(s), _const(C)
    if S is not None and not S.is_zero() and Cc is not None and k == 1:
        lam = d.coeff(1)
        p = ctx.solve_param("alpha", alpha * alpha * S * lam * lam - Cc)
        if p:
            ctx.emit(labels["i1"], ExpPoly.term(alpha, d), [p])
    if s.is_zero():
        A = _const(a)
        if A is not None and Cc is not None and k == 2:
            p = ctx.solve_param("alpha", alpha * alpha * A * d.coeff(2) * 2 - Cc)
            if p:
                ctx.emit(labels["i2"], ExpPoly.term(alpha, d), [p])
        mu_poly = C.exact_div(a)
        if mu_poly is not None and mu_poly.is_constant() and k == 1:
            mu, lam = mu_poly.constant_term(), d.coeff(1)
            p = ctx.solve_param("alpha", alpha * alpha + mu)
            if p:
                form = ExpPoly.term(Poly([_unit("beta"), alpha]), d)
                ctx.emit(labels["i3"], form, [free("beta", nonzero=False), p])
            beta = _unit("beta")
            a_ii1 = mu * (lam * lam * 4).inverse() * _unit("beta", -1)
            form = ExpPoly.term(alpha, d * 2) + ExpPoly.term(beta)
            ctx.emit(labels["ii1"], form, [free("beta"), derived("alpha", a_ii1)])
            delta = _unit("delta")
            a_iii = mu * Scalar(Fraction(1, 4)) * _unit("beta", -1) * _unit("delta", -2)
            form = ExpPoly.term(alpha, (Poly.const(lam) - delta) * Z) + ExpPoly.term(beta, (Poly.const(lam) + delta) * Z)
            ctx.emit(labels["iii"], form, [free("beta"), free("delta", excluded=(lam, -lam)), derived("alpha", a_iii)],
                     note="delta = lambda - gamma; gamma*(2*lambda - gamma) != 0 excludes delta = +-lambda")
    elif a.degree >= 2 and a.degree == b.degree and s.degree < a.degree and C.exact_div(a) is not None:
        _theorem_b_ii2(ctx, labels["ii2"])
    if eq.origin is Shape.E11:
        if not c.is_constant():
            ctx.ansatz(labels["i"], "p*(p''+2p'd'+p*d''+p*(d')^2) - a*(p'+p*d')^2 = b")
    elif not (a.is_constant() and b.is_constant() and c.is_constant()):
        ctx.ansatz(labels["i"], "a*p*(p''+2p'd'+p*d''+p*(d')^2) - b*(p'+p*d')^2 = c")


def _theorem_b_ii2(ctx: _Context, label: str) -> None:
    eq = ctx.eq1
    d = eq.d
    beta = _unit("_beta")
    ctx.emit(label, ExpPoly.term(_unit("T"), d * 2) + ExpPoly.term(_unit("beta")), [free("T"), free("beta")],
             note="T polynomial with 4(a-b)(d')^2T^2 + 2ad''T^2 + 4(a-b)d'TT' + aTT'' - b(T')^2 = 0",
             status=Status.AnsatzOnly)

    def constraint(T: Poly) -> ExpPoly:
        from ..equation import residual

        return residual(eq, ExpPoly.term(T, d * 2) + beta)

    try:
        sols = solve_generic(constraint, ctx.degree_bound, ["_beta"], ["_beta"], {"_beta": "beta"})
    except (EmptyAnsatz, CapabilityExceeded) as exc:
        if ctx.strict and isinstance(exc, CapabilityExceeded):
            raise
        ctx.note(f"{label}: {exc}")
        return
    for s in sols:
        f = ExpPoly.term(s.poly, d * 2) + ExpPoly.term(s.extras["beta"])
        ctx.emit(label, f, [free(n, nonzero=False) for n in s.free])


def classify(eq: BinomialEquation, degree_bound: int = MAX_DEGREE_BOUND, strict: bool = False) -> Classification:
    """All solution families whose preconditions hold for ``eq``, each residual-verified."""
    if eq.degenerate:
        from .degenerate import degenerate_classify

        return degenerate_classify(eq, degree_bound)
    ctx = _Context(eq, degree_bound, strict)
    ctx.out.diagnostics.extend(structural_checks(eq))
    if eq.shape is Shape.E12:
        _classify_e12(ctx)
    elif eq.shape is Shape.E13:
        _classify_e13(ctx)
    else:
        _classify_e14(ctx)
    return ctx.out
