"""Equation input in slot form (``eq13: a=...; b=...``) or full form (``a*f*f' - ... = ...``)."""
from __future__ import annotations

import re

from ..equation import BinomialEquation, Shape, build_equation
from ..errors import BinomialODEError, ParseError, UnrecognizedShape
from ..exppoly import ExpPoly, Poly
from ..scalar import EMPTY_TOWER, Tower
from .parser import BinOp, Call, Neg, Node, Resolver, _as_poly, evaluate, parse_poly, parse_sides

_SLOT_HEAD = re.compile(r"\s*eq(1[1-4])\s*:(.*)\Z", re.S)
_SLOTS = {Shape.E11: ("a", "b", "c"), Shape.E12: ("a", "b", "c", "d"),
          Shape.E13: ("a", "b", "c", "d"), Shape.E14: ("a", "b", "c", "d")}

# derivative monomials (exponents of f, f', f'') carried by the a- and b-slots
_PATTERNS = {
    Shape.E12: ((1, 0, 1), (0, 2)),
    Shape.E13: ((1, 1), (0, 0, 2)),
    Shape.E14: ((0, 1, 1), (2,)),
}


def _build(shape: Shape, args, text: str, degenerate: bool) -> BinomialEquation:
    try:
        if shape is Shape.E11:
            return build_equation(shape, *args)
        return build_equation(shape, *args, degenerate=degenerate)
    except BinomialODEError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"invalid equation: {exc}", (0, len(text)), text) from exc


def _parse_slots(shape: Shape, body: str, text: str, tower: Tower, degenerate: bool) -> BinomialEquation:
    offset = len(text) - len(body)
    values: dict[str, Poly] = {}
    pos = 0
    for chunk in body.split(";"):
        start = offset + pos
        pos += len(chunk) + 1
        if not chunk.strip():
            continue
        key, eq, val = chunk.partition("=")
        key = key.strip()
        if not eq or key not in _SLOTS[shape]:
            raise ParseError(f"expected one of {', '.join(_SLOTS[shape])} as 'name=value'", (start, start + len(chunk)), text)
        if key in values:
            raise ParseError(f"slot {key!r} given twice", (start, start + len(chunk)), text)
        try:
            values[key] = parse_poly(val, tower)
        except ParseError as exc:
            base = start + len(chunk.partition("=")[0]) + 1
            span = (base + exc.span[0], base + exc.span[1]) if exc.span else None
            raise type(exc)(exc.message, span, text) from None
    missing = [k for k in _SLOTS[shape] if k not in values]
    if missing:
        raise ParseError(f"missing slot(s) {', '.join(missing)}", (0, len(text)), text)
    return _build(shape, [values[k] for k in _SLOTS[shape]], text, degenerate)


def _rhs_parts(node: Node, resolver: Resolver, text: str) -> tuple[Poly, Poly] | None:
    """Split a product ``coefficient * exp(arg) * ...`` keeping the exponent's constant term."""
    factors, sign = [], 1
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Neg):
            sign = -sign
            stack.append(n.operand)
        elif isinstance(n, BinOp) and n.op == "*":
            stack.extend((n.right, n.left))
        else:
            factors.append(n)
    exps = [n for n in factors if isinstance(n, Call)]
    if not exps:
        return None
    exponent = Poly()
    coeff = ExpPoly.term(sign)
    for n in factors:
        v = evaluate(n.arg if isinstance(n, Call) else n, resolver, text)
        p = _as_poly(v)
        if p is None:
            return None
        if isinstance(n, Call):
            exponent = exponent + p
        else:
            coeff = coeff * p
    c = coeff.terms.get(Poly()) if set(coeff.terms) <= {Poly()} else None
    return (c if c is not None else Poly()), exponent


def _parse_full(text: str, tower: Tower, degenerate: bool) -> BinomialEquation:
    lhs_node, rhs_node = parse_sides(text)
    resolver = Resolver(tower, allow_f=True)
    value = evaluate(BinOp("-", lhs_node, rhs_node), resolver, text)
    free = value.pop((), ExpPoly())
    rhs = -free
    monos = {k: v for k, v in value.items()}
    span = (0, len(text))
    if any(len(k) > 3 for k in monos):
        raise UnrecognizedShape("derivatives above f'' do not occur in these equations", span, text)
    coeffs: dict[tuple, Poly] = {}
    for k, v in monos.items():
        p = _as_poly({(): v})
        if p is None:
            raise UnrecognizedShape("left-side coefficients must be polynomials", span, text)
        coeffs[k] = p
    shape = next((s for s, pat in _PATTERNS.items() if set(coeffs) <= set(pat) and coeffs), None)
    if shape is None:
        raise UnrecognizedShape("left side is not one of the four binomial shapes", span, text)
    ka, kb = _PATTERNS[shape]
    a, b = coeffs.get(ka, Poly()), -coeffs.get(kb, Poly())
    # a right side written as coefficient*exp(arg) keeps the constant part of arg
    parts = None
    if not any(k for k in evaluate(rhs_node, resolver, text)):
        parts = _rhs_parts(rhs_node, resolver, text)
        if parts is not None and ExpPoly.term(parts[0], parts[1]) != rhs:
            parts = None
    if parts is None:
        if rhs.is_zero():
            raise UnrecognizedShape("right side must be c*exp(2*d) with d non-constant", span, text)
        if len(rhs.terms) != 1:
            raise UnrecognizedShape("right side must be a single exponential term", span, text)
        (q, c), = rhs.terms.items()
        parts = (c, q)
    c, twice_d = parts
    d_raw = Poly([x / 2 for x in twice_d.coeffs])
    if shape is Shape.E12 and a == Poly.const(1):
        return _build(Shape.E11, [b, c, d_raw], text, degenerate)
    return _build(shape, [a, b, c, d_raw], text, degenerate)


def parse_equation(text: str, tower: Tower = EMPTY_TOWER, *, degenerate: bool = False) -> BinomialEquation:
    """Parse an equation in slot form or full form.

    ``degenerate=True`` admits coefficient triples with ``a*b*c == 0``.
    """
    m = _SLOT_HEAD.match(text)
    if m:
        return _parse_slots(Shape("E" + m.group(1)), m.group(2), text, tower, degenerate)
    if "=" not in text:
        raise ParseError("expected 'eqNN: ...' slots or 'lhs = rhs'", (0, len(text)), text)
    return _parse_full(text, tower, degenerate)
