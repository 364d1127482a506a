"""Recursive-descent parser for exponential-polynomial expressions.

Grammar (left-associative binary operators)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' '-'? uint)?
    atom   := uint | name | 'exp' '(' expr ')' | '(' expr ')'

Names resolve, in order, to the polynomial variable, a tower generator,
``e`` / ``e_N`` (the constants ``e`` and ``e^(1/N)``), the derivative symbols
``f``, ``f'``, ... (equations only), and otherwise a unit symbol.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from ..errors import (
    BinomialODEError,
    NonPolynomialExponent,
    ParseError,
)
from ..exppoly import ExpPoly, Poly, _exp_constant_unit
from ..scalar import EMPTY_TOWER, Scalar, Tower

MAX_POWER = 64
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*'*)|(?P<op>[-+*/^()=]))")
_E_ROOT = re.compile(r"e_([1-9][0-9]*)$")
_F_NAME = re.compile(r"f('*)$")


# -- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    span: tuple[int, int] = field(default=(0, 0), compare=False)


Node = Num | Name | Neg | BinOp | Pow | Call
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node: Node, min_prec: int = 0) -> str:
    """Print ``node`` with the fewest parentheses that reparse to the same tree."""
    if isinstance(node, Num):
        out, prec = str(node.value), 5
    elif isinstance(node, Name):
        out, prec = node.name, 5
    elif isinstance(node, Call):
        out, prec = f"{node.func}({to_text(node.arg)})", 5
    elif isinstance(node, Pow):
        out, prec = f"{to_text(node.base, 5)}^{node.exponent}", 4
    elif isinstance(node, Neg):
        out, prec = f"-{to_text(node.operand, 3)}", 3
    else:
        p = _PREC[node.op]
        out, prec = f"{to_text(node.left, p)}{node.op}{to_text(node.right, p + 1)}", p
    return f"({out})" if prec < min_prec else out


# -- tokenizer and parser ---------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", (start, start + 1), text)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind), m.end(kind)))
        pos = m.end()
    out.append(Token("end", "", len(text), len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, (tok.start, max(tok.end, tok.start + 1)), self.text)

    def accept(self, op: str) -> Token | None:
        if self.tok.kind == "op" and self.tok.text == op:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, op: str) -> Token:
        t = self.accept(op)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {op!r}, found {found!r}")
        return t

    def expect_end(self) -> None:
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            right = self.term()
            node = BinOp(op, node, right, (node.span[0], right.span[1]))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            right = self.unary()
            node = BinOp(op, node, right, (node.span[0], right.span[1]))
        return node

    def unary(self) -> Node:
        t = self.accept("-")
        if t is not None:
            operand = self.unary()
            return Neg(operand, (t.start, operand.span[1]))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.accept("^") is None:
            return base
        neg = self.accept("-")
        t = self.tok
        if t.kind != "num":
            raise self.error("exponent must be an integer literal")
        self.i += 1
        n = int(t.text)
        if n > MAX_POWER:
            raise self.error(f"exponent {n} exceeds {MAX_POWER}", t)
        return Pow(base, -n if neg else n, (base.span[0], t.end))

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text), (t.start, t.end))
        if t.kind == "name":
            self.i += 1
            if t.text == "exp":
                self.expect("(")
                arg = self.expr()
                close = self.expect(")")
                return Call("exp", arg, (t.start, close.end))
            if self.tok.kind == "op" and self.tok.text == "(" and _F_NAME.match(t.text):
                # accept f(z), f'(z), ... as a spelling of f, f', ...
                self.i += 1
                inner = self.tok
                if inner.kind != "name":
                    raise self.error("expected the variable name after 'f('")
                self.i += 1
                self.expect(")")
            return Name(t.text, (t.start, t.end))
        if self.accept("(") is not None:
            node = self.expr()
            self.expect(")")
            return node
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def _guard(fn, text: str):
    try:
        return fn()
    except RecursionError:
        raise ParseError("expression nested too deeply", (0, len(text)), text) from None


def parse_ast(text: str) -> Node:
    """Parse ``text`` into an AST (no name resolution)."""
    def run():
        p = _Parser(text)
        node = p.expr()
        p.expect_end()
        return node

    return _guard(run, text)


def parse_sides(text: str) -> tuple[Node, Node]:
    """Parse ``lhs = rhs``."""
    def run():
        p = _Parser(text)
        lhs = p.expr()
        p.expect("=")
        rhs = p.expr()
        p.expect_end()
        return lhs, rhs

    return _guard(run, text)


# -- evaluation -----------------------------------------------------------------

# Values are maps from derivative monomials (powers of f, f', f'', ...) to ExpPoly
# coefficients; plain expressions only use the empty monomial.
FValue = dict[tuple[int, ...], ExpPoly]


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    n = max(len(m1), len(m2))
    out = [0] * n
    for i, e in enumerate(m1):
        out[i] += e
    for i, e in enumerate(m2):
        out[i] += e
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _add(x: FValue, y: FValue, sign: int = 1) -> FValue:
    out = dict(x)
    for k, v in y.items():
        s = out.get(k, ExpPoly()) + (v if sign > 0 else -v)
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _mul(x: FValue, y: FValue) -> FValue:
    out: FValue = {}
    for k1, v1 in x.items():
        for k2, v2 in y.items():
            k = _mono_mul(k1, k2)
            s = out.get(k, ExpPoly()) + v1 * v2
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
    return out


def _as_scalar(v: FValue) -> Scalar | None:
    if not v:
        return Scalar(0)
    if set(v) != {()}:
        return None
    e = v[()]
    if set(e.terms) != {Poly()}:
        return None
    p = e.terms[Poly()]
    return p.constant_term() if p.is_constant() else None


def _as_poly(v: FValue) -> Poly | None:
    if not v:
        return Poly()
    if set(v) != {()}:
        return None
    e = v[()]
    if set(e.terms) - {Poly()}:
        return None
    return e.terms.get(Poly(), Poly())


def _const(s) -> FValue:
    e = ExpPoly.coerce(Poly.const(s))
    return {(): e} if not e.is_zero() else {}


class Resolver:
    """Name resolution for the evaluator."""

    def __init__(self, tower: Tower = EMPTY_TOWER, variable: str = "z", allow_f: bool = False):
        self.tower = tower
        self.variable = variable
        self.allow_f = allow_f

    def resolve(self, node: Name, text: str) -> FValue:
        name = node.name
        if name == self.variable:
            return {(): ExpPoly.coerce(Poly.z())}
        fm = _F_NAME.match(name)
        if fm:
            if not self.allow_f:
                raise ParseError("the unknown function only appears in equations", node.span, text)
            order = len(fm.group(1))
            return {tuple([0] * order + [1]): ExpPoly.term(1)}
        if "'" in name:
            raise ParseError(f"primes only apply to f, not {name!r}", node.span, text)
        if name in self.tower.names():
            return _const(self.tower.gen(name))
        if name == "e":
            return _const(_exp_constant_unit(Scalar(1)))
        m = _E_ROOT.match(name)
        if m and int(m.group(1)) > 1:
            return _const(_exp_constant_unit(Scalar(Fraction(1, int(m.group(1))))))
        if name == "exp":
            raise ParseError("'exp' needs an argument", node.span, text)
        return _const(Scalar.unit(name))


def evaluate(node: Node, resolver: Resolver, text: str = "") -> FValue:
    def fail(msg: str, n: Node, cls=ParseError):
        return cls(msg, n.span, text)

    def ev(n: Node) -> FValue:
        if isinstance(n, Num):
            return _const(n.value)
        if isinstance(n, Name):
            return resolver.resolve(n, text)
        if isinstance(n, Neg):
            return {k: -v for k, v in ev(n.operand).items()}
        if isinstance(n, Call):
            arg = ev(n.arg)
            p = _as_poly(arg)
            if p is None:
                raise fail("exponent argument must be a polynomial in the variable", n.arg, NonPolynomialExponent)
            return {(): ExpPoly.term(1, p)}
        if isinstance(n, Pow):
            base = ev(n.base)
            if n.exponent >= 0:
                out = _const(1)
                for _ in range(n.exponent):
                    out = _mul(out, base)
                return out
            s = _as_scalar(base)
            if s is None:
                raise fail("negative powers need a constant base", n)
            return _const(s.inverse() ** (-n.exponent))
        left, right = ev(n.left), ev(n.right)
        if n.op == "+":
            return _add(left, right)
        if n.op == "-":
            return _add(left, right, -1)
        if n.op == "*":
            return _mul(left, right)
        s = _as_scalar(right)
        if s is None:
            raise fail("division only by constants", n.right)
        return _mul(left, _const(s.inverse()))

    try:
        return ev(node)
    except ParseError:
        raise
    except (BinomialODEError, ArithmeticError) as exc:
        raise ParseError(f"cannot evaluate: {exc}", node.span, text) from None
    except RecursionError:
        raise ParseError("expression nested too deeply", node.span, text) from None


def _plain(value: FValue, node: Node, text: str) -> ExpPoly:
    if set(value) - {()}:
        raise ParseError("the unknown function only appears in equations", node.span, text)
    return value.get((), ExpPoly())


def parse_expression(text: str, tower: Tower = EMPTY_TOWER, variable: str = "z") -> ExpPoly:
    """Parse ``text`` into a canonical :class:`ExpPoly`."""
    node = parse_ast(text)
    return _plain(evaluate(node, Resolver(tower, variable), text), node, text)


def parse_poly(text: str, tower: Tower = EMPTY_TOWER, variable: str = "z") -> Poly:
    """Parse a polynomial in ``variable``; exponentials are rejected."""
    node = parse_ast(text)
    e = _plain(evaluate(node, Resolver(tower, variable), text), node, text)
    if set(e.terms) - {Poly()}:
        raise ParseError("expected a polynomial, found an exponential term", node.span, text)
    return e.terms.get(Poly(), Poly())


def parse_scalar(text: str, tower: Tower = EMPTY_TOWER) -> Scalar:
    p = parse_poly(text, tower)
    if not p.is_constant():
        raise ParseError("expected a constant", (0, len(text)), text)
    return p.constant_term()


def walk(node: Node) -> Iterator[Node]:
    yield node
    for child in (getattr(node, a, None) for a in ("operand", "left", "right", "base", "arg")):
        if isinstance(child, (Num, Name, Neg, BinOp, Pow, Call)):
            yield from walk(child)
