"""Exact root extraction and triangular elimination over the scalar tower.

Unknowns are unit symbols (formal Laurent variables); an equation is a
Scalar that must vanish.  Only univariate steps are performed: anything that
would need a genuinely multivariate method raises ``CapabilityExceeded``.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import CapabilityExceeded, NotInvertible
from ..scalar import EMPTY_TOWER, Scalar, Tower, omega_tower, rational_sqrt, tower_extend


def lift(s: Scalar, tower: Tower) -> Scalar:
    return s.in_tower(tower) if s.tower_depth() else Scalar._raw(s.terms, tower)


def wider(*towers: Tower) -> Tower:
    best = EMPTY_TOWER
    for t in towers:
        if len(t) > len(best):
            best = t
    return best


def _fresh_name(tower: Tower, base: str = "r") -> str:
    taken = set(tower.names())
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _rational_root(q: Fraction, n: int) -> Fraction | None:
    if n == 2:
        return rational_sqrt(q)
    if n == 3:
        sign = -1 if q < 0 else 1
        num, den = abs(q.numerator), q.denominator
        rn, rd = round(num ** (1 / 3)), round(den ** (1 / 3))
        for cn in (rn - 1, rn, rn + 1):
            for cd in (rd - 1, rd, rd + 1):
                if cn >= 0 and cd > 0 and cn**3 == num and cd**3 == den:
                    return sign * Fraction(cn, cd)
    return None


def _split_units(value: Scalar) -> tuple[Scalar, tuple]:
    monos = value.unit_monomials()
    if len(monos) != 1:
        raise CapabilityExceeded(f"root of {value}: mixes several unit monomials")
    (un,) = monos
    core = Scalar._raw({(tex, ()): q for (tex, _), q in value.terms.items()}, value.tower)
    return core, un


def principal_root(core: Scalar, n: int, tower: Tower) -> tuple[Scalar, Tower]:
    """An ``n``-th root of a unit-free scalar, extending ``tower`` only if needed."""
    tower = wider(tower, core.tower)
    if core.is_rational():
        r = _rational_root(core.to_fraction(), n)
        if r is not None:
            return Scalar(r, tower), tower
    poly = [-lift(core, tower)] + [Scalar(0)] * (n - 1) + [Scalar(1)]
    idx = tower.find(poly)
    if idx is not None:
        return tower.gen(idx), tower
    mid = complex(core.embed(64).mid)
    root = cmath.exp(cmath.log(mid) / n) if mid else 0j
    rad = abs(root) * math.sin(math.pi / n) * 0.5
    ext = tower_extend(tower, poly, (root, rad), name=_fresh_name(tower))
    return ext.gen(len(ext) - 1), ext


def nth_roots(value: Scalar, n: int, tower: Tower = EMPTY_TOWER) -> tuple[list[Scalar], Tower]:
    """All ``n``-th roots of ``value`` for ``n`` in 1..3."""
    value = Scalar.coerce(value)
    tower = wider(tower, value.tower)
    if value.is_zero():
        return [Scalar(0, tower)], tower
    if n == 1:
        return [value], tower
    if n not in (2, 3):
        raise CapabilityExceeded(f"{n}-th roots are not supported")
    core, un = _split_units(value)
    if any(e % n for _, e in un):
        raise CapabilityExceeded(f"unit part of {value} is not an exact {n}-th power")
    unit_root = Scalar._raw({((), tuple((s, e // n) for s, e in un)): Fraction(1)}, EMPTY_TOWER)
    base, tower = principal_root(core, n, tower)
    if n == 2:
        roots = [base, -base]
    else:
        tower, w = omega_tower(tower)
        base = lift(base, tower)
        roots = [base, base * w, base * w * w]
    return [lift(r * unit_root, tower) for r in roots], tower


# -- univariate equations ----------------------------------------------------

def coefficients_in(expr: Scalar, name: str) -> dict[int, Scalar]:
    """Split ``expr`` as ``sum_k A_k x^k`` where ``x`` is the unit symbol ``name``."""
    groups: dict[int, dict] = {}
    for (tex, un), q in expr.terms.items():
        k = 0
        rest = []
        for s, e in un:
            if s.name == name:
                k = e
            else:
                rest.append((s, e))
        groups.setdefault(k, {})[(tex, tuple(rest))] = q
    # exponents are kept as they are: a positive lowest power means x = 0 is a root
    return {k: Scalar._raw(g, expr.tower) for k, g in groups.items()}


def _divide(num: Scalar, den: Scalar) -> Scalar:
    try:
        return num * den.inverse()
    except NotInvertible as exc:
        raise CapabilityExceeded(f"cannot divide by {den}: {exc}") from exc


def _sympy_rational_roots(coeffs: Mapping[int, Scalar], tower: Tower) -> tuple[list[Scalar], Tower]:
    import sympy

    x = sympy.Symbol("x")
    top = max(coeffs)
    expr = sum(sympy.Rational(c.to_fraction().numerator, c.to_fraction().denominator) * x**k for k, c in coeffs.items())
    _, factors = sympy.factor_list(sympy.Poly(expr, x))
    roots: list[Scalar] = []
    for fac, _mult in factors:
        cs = [Fraction(int(v.p), int(v.q)) for v in reversed(fac.all_coeffs())]
        sub = {k: Scalar(c) for k, c in enumerate(cs) if c}
        found, tower = univariate_roots(sub, tower, allow_sympy=False)
        roots.extend(found)
    if not roots and top > 0:
        return [], tower
    return roots, tower


def univariate_roots(coeffs: Mapping[int, Scalar], tower: Tower = EMPTY_TOWER, *, allow_sympy: bool = True) -> tuple[list[Scalar], Tower]:
    """Roots of ``sum_k coeffs[k] x^k`` (coefficients free of unknowns)."""
    coeffs = {k: c for k, c in coeffs.items() if not c.is_zero()}
    for c in coeffs.values():
        tower = wider(tower, c.tower)
    if not coeffs:
        raise CapabilityExceeded("identically vanishing equation has no isolated roots")
    top = max(coeffs)
    low = min(coeffs)
    roots: list[Scalar] = [Scalar(0, tower)] if low > 0 else []
    coeffs = {k - low: c for k, c in coeffs.items()}
    top -= low
    if top == 0:
        return roots, tower
    if len(coeffs) == 2 and top <= 3:
        # pure power x^top = -A0/Atop
        found, tower = nth_roots(_divide(-coeffs[0], coeffs[top]), top, tower)
        return roots + found, tower
    if top == 2:
        a2, a1, a0 = coeffs[2], coeffs.get(1, Scalar(0)), coeffs.get(0, Scalar(0))
        disc = a1 * a1 - a2 * a0 * 4
        sq, tower = nth_roots(disc, 2, tower)
        inv = _divide(Scalar(1), a2 * 2)
        found = [lift((s - a1) * inv, tower) for s in sq[: 1 if disc.is_zero() else 2]]
        return roots + found, tower
    if allow_sympy and all(c.is_rational() for c in coeffs.values()):
        found, tower = _sympy_rational_roots(coeffs, tower)
        return roots + [lift(r, tower) for r in found], tower
    raise CapabilityExceeded(f"degree-{top} univariate equation outside the supported cases")


def solve_for(expr: Scalar, name: str, tower: Tower = EMPTY_TOWER) -> tuple[list[Scalar], Tower]:
    return univariate_roots(coefficients_in(expr, name), tower)


def _dedupe(values: Iterable) -> list:
    out = []
    for v in values:
        if v not in out:
            out.append(v)
    return out


def solve_triangular(
    equations: Iterable[Scalar],
    unknowns: Iterable[str],
    nonzero: Iterable[str] = (),
    tower: Tower = EMPTY_TOWER,
) -> list[tuple[dict[str, Scalar], Tower]]:
    """All solution branches of a system solvable one unknown at a time.

    Unknowns that no equation constrains are left out of the returned maps
    (they stay free).  An equation free of unknowns that is not identically
    zero kills its branch.
    """
    unknowns = set(unknowns)
    nonzero = set(nonzero)
    eqs = [e for e in equations if not e.is_zero()]
    for e in eqs:
        if not (e.unit_names() & unknowns):
            return []
    if not eqs:
        return [({}, tower)]
    best = None
    for i, e in enumerate(eqs):
        names = e.unit_names() & unknowns
        if len(names) != 1:
            continue
        (x,) = names
        cs = coefficients_in(e, x)
        deg = max(cs) - min(cs)
        key = (deg, i)
        if best is None or key < best[0]:
            best = (key, x, cs)
    if best is None:
        raise CapabilityExceeded("no equation is univariate in the remaining unknowns")
    _, x, cs = best
    roots, tower = univariate_roots(cs, tower)
    if x in nonzero:
        roots = [r for r in roots if not r.is_zero()]
    out = []
    for r in _dedupe(roots):
        rest = [e.subs({x: r}) for e in eqs]
        for sol, t in solve_triangular(rest, unknowns - {x}, nonzero, wider(tower, r.tower)):
            sol = dict(sol)
            sol[x] = lift(r, t)
            out.append((sol, t))
    return out
