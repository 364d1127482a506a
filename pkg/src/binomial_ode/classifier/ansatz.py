"""Polynomial ansatz: unknown coefficients matched degree by degree."""
from __future__ import annotations

from dataclasses import replace
from typing import Callable, Iterable, NamedTuple

from ..equation import BinomialEquation, Shape, residual
from ..errors import CapabilityExceeded, EmptyAnsatz
from ..exppoly import ExpPoly, Poly, _exp_constant_unit
from ..scalar import Scalar
from .solve import coefficients_in, solve_triangular

MAX_DEGREE_BOUND = 8


class AnsatzSolution(NamedTuple):
    poly: Poly
    certificate: ExpPoly  # exact residual of the recovered solution (the zero ExpPoly)


def unit_free(eq: BinomialEquation) -> tuple[BinomialEquation, Scalar]:
    """Drop the right-hand unit factor ``h^2``; solutions of the result scale by ``h``."""
    if eq.d_shift.is_zero():
        return eq, Scalar(1)
    h = _exp_constant_unit(eq.d_shift)
    return replace(eq, rhs_unit=Scalar(1), d_shift=Scalar(0)), h


def generic_poly(degree: int, prefix: str = "_p") -> Poly:
    return Poly([Scalar.unit(f"{prefix}{i}") for i in range(degree + 1)])


def _equation_groups(r: ExpPoly) -> list[list[Scalar]]:
    """Coefficient equations per exponent, highest power of ``z`` first."""
    return [[c for c in reversed(p.coeffs)] for _, p in r.sorted_terms()]


def _balanced(groups: list[list[Scalar]], unknowns: set[str], lead: str) -> bool:
    for eqs in groups:
        top = next((e for e in eqs if not e.is_zero()), None)
        if top is None:
            continue
        names = top.unit_names() & unknowns
        if not names:
            return False
        if names == {lead} and len(coefficients_in(top, lead)) == 1:
            return False
    return True


class GenericSolution(NamedTuple):
    poly: Poly
    extras: dict
    degree: int
    free: tuple[str, ...]


def solve_generic(
    constraint: Callable[[Poly], ExpPoly],
    degree_bound: int,
    extra_unknowns: Iterable[str] = (),
    extra_nonzero: Iterable[str] = (),
    rename: dict[str, str] | None = None,
) -> list[GenericSolution]:
    """Solve ``constraint(P) == 0`` for polynomials ``P`` of degree at most ``degree_bound``.

    ``constraint`` may mention extra unknown unit symbols (e.g. an additive
    constant).  Unknowns left unconstrained become free parameters named
    ``k<i>`` (or per ``rename``).
    """
    if degree_bound > MAX_DEGREE_BOUND:
        raise CapabilityExceeded(f"degree bound {degree_bound} exceeds {MAX_DEGREE_BOUND}")
    extra_unknowns = list(extra_unknowns)
    rename = dict(rename or {})
    any_balanced = False
    out: list[GenericSolution] = []
    for m in range(degree_bound + 1):
        P = generic_poly(m)
        unknowns = {f"_p{i}" for i in range(m + 1)} | set(extra_unknowns)
        lead = f"_p{m}"
        r = constraint(P)
        groups = _equation_groups(r)
        if not _balanced(groups, unknowns, lead):
            continue
        any_balanced = True
        eqs = [e for g in groups for e in g]
        for sol, _tower in solve_triangular(eqs, unknowns, {lead, *extra_nonzero}):
            leftover = sorted(unknowns - sol.keys())
            names = {n: rename.get(n, "k" + n[2:] if n.startswith("_p") else n.lstrip("_")) for n in leftover}
            mapping = dict(sol)
            mapping.update({n: Scalar.unit(new) for n, new in names.items()})
            poly = P.subs(mapping)
            extras = {names.get(n, n): mapping[n] for n in extra_unknowns}
            if constraint(poly).subs({n: mapping[n] for n in extra_unknowns}).is_zero():
                out.append(GenericSolution(poly, extras, m, tuple(names.values())))
    if not any_balanced:
        raise EmptyAnsatz(f"no degree up to {degree_bound} balances the constraint")
    return out


def shape_constraint(eq: BinomialEquation) -> Callable[[Poly], ExpPoly]:
    """``P -> residual(eq, P e^d)`` for the standard ``f = P e^d`` ansatz."""
    def constraint(P: Poly) -> ExpPoly:
        return residual(eq, ExpPoly.term(P, eq.d))

    return constraint


def polynomial_ansatz(eq: BinomialEquation, degree_bound: int = MAX_DEGREE_BOUND) -> list[AnsatzSolution]:
    """Polynomials ``P`` with ``f = P e^d`` solving ``eq``, each with its exact residual."""
    if eq.shape not in (Shape.E12, Shape.E13, Shape.E14):
        raise ValueError(f"unsupported shape {eq.shape}")
    eq1, h = unit_free(eq)
    sols = solve_generic(shape_constraint(eq1), degree_bound)
    out = []
    for s in sols:
        P = s.poly * h
        out.append(AnsatzSolution(P, residual(eq, ExpPoly.term(P, eq.d))))
    return out
