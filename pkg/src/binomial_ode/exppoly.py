"""Polynomials over :class:`Scalar` and exponential polynomials ``sum P_i e^{Q_i}``.

An :class:`ExpPoly` keeps every exponent normalized to ``Q(0) = 0`` and never
stores a zero coefficient, so two keys always differ by a non-constant
polynomial.  By the Borel identity for exponential sums the function is then
identically zero exactly when the term map is empty.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath
from mpmath import mp

from .ball import CBall
from .errors import ZeroFunction
from .scalar import EMPTY_TOWER, Scalar, UnitSymbol, _join_signed, _term_text, exp_unit

NEG_INF = float("-inf")


class Poly:
    """Univariate polynomial in ``z``; ``coeffs[i]`` multiplies ``z**i``."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [Scalar.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def z(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return cls([x])

    # -- structure ---------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_term(self) -> Scalar:
        return self.coeffs[0] if self.coeffs else Scalar(0)

    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else Scalar(0)

    def coeff(self, i: int) -> Scalar:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Scalar(0)

    def without_constant(self) -> "Poly":
        if not self.coeffs:
            return self
        return Poly((Scalar(0),) + self.coeffs[1:])

    def unit_names(self) -> set[str]:
        out: set[str] = set()
        for c in self.coeffs:
            out |= c.unit_names()
        return out

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = Poly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + b[i] for i, x in enumerate(a[: len(b)])] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                s = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
            return Poly(c * s for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                t = x * y
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        return Poly(Scalar(0) if c is None else c for c in out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly([1])
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "Poly":
        return Poly(c * i for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x) -> Scalar:
        x = Scalar.coerce(x)
        acc = Scalar(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Euclidean division; the leading coefficient of ``other`` must be invertible."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv = other.leading().inverse()
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Scalar(0)] * (dq + 1)
        n = len(other.coeffs)
        for k in range(dq, -1, -1):
            c = rem[k + n - 1] * inv
            quot[k] = c
            if c.is_zero():
                continue
            for j, oc in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * oc
        return Poly(quot), Poly(rem[: n - 1])

    def exact_div(self, other: "Poly") -> "Poly | None":
        q, r = self.divmod(other)
        return q if r.is_zero() else None

    def monic(self) -> "Poly":
        return self * self.leading().inverse() if self.coeffs else self

    def subs(self, mapping: Mapping[str, Scalar]) -> "Poly":
        if not mapping:
            return self
        return Poly(c.subs(mapping) for c in self.coeffs)

    def eval_ball(self, z: CBall, coeff_balls: Sequence[CBall] | None = None) -> CBall:
        balls = coeff_balls if coeff_balls is not None else [c.embed(mp.prec) for c in self.coeffs]
        acc = CBall.exact(0)
        for c in reversed(balls):
            acc = acc * z + c
        return acc

    def to_complex(self) -> list[complex]:
        return [complex(c.embed(53).mid) for c in self.coeffs]

    # -- comparison / text -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.coerce(Scalar.coerce(other))
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def text(self, var: str = "z") -> str:
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            parts.append(_term_text(c, mono))
        return _join_signed(parts) if parts else "0"

    __str__ = text

    def __repr__(self):
        return f"Poly({self.text()!r})"


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by Euclid's algorithm (coefficients must lie in a field)."""
    while not q.is_zero():
        p, q = q, p.divmod(q)[1]
    return p.monic() if not p.is_zero() else p


def _exp_constant_unit(q0: Scalar) -> Scalar:
    """``e^{q0}`` as a unit-symbol monomial."""
    if q0.is_rational():
        sym, k = exp_unit(q0.to_fraction())
        return Scalar._raw({((), ((sym, k),)): Fraction(1)}, EMPTY_TOWER)
    text = q0.text()

    def value(q0=q0):
        return mpmath.exp(q0.embed(mp.prec).mid)

    return Scalar.unit(UnitSymbol(f"exp({text})", value))


class ExpPoly:
    """Canonical finite sum ``sum_i P_i(z) e^{Q_i(z)}`` with distinct ``Q_i``, ``Q_i(0)=0``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[tuple] | Mapping = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Poly, Poly] = {}
        for exponent, coeff in items:
            exponent = Poly.coerce(exponent)
            coeff = Poly.coerce(coeff)
            if coeff.is_zero():
                continue
            q0 = exponent.constant_term()
            if not q0.is_zero():
                coeff = coeff * _exp_constant_unit(q0)
                exponent = exponent.without_constant()
            prev = acc.get(exponent)
            acc[exponent] = coeff if prev is None else prev + coeff
        self.terms = {k: v for k, v in acc.items() if not v.is_zero()}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "ExpPoly":
        e = cls.__new__(cls)
        e.terms = terms
        e._hash = None
        return e

    @classmethod
    def term(cls, coeff=1, exponent=None) -> "ExpPoly":
        return cls([(Poly() if exponent is None else exponent, coeff)])

    @classmethod
    def coerce(cls, x) -> "ExpPoly":
        if isinstance(x, ExpPoly):
            return x
        return cls.term(Poly.coerce(x))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "ExpPoly":
        other = ExpPoly.coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            prev = out.get(k)
            if prev is None:
                out[k] = v
            else:
                s = prev + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return ExpPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "ExpPoly":
        return ExpPoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "ExpPoly":
        return self + (-ExpPoly.coerce(other))

    def __rsub__(self, other) -> "ExpPoly":
        return ExpPoly.coerce(other) - self

    def __mul__(self, other) -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            if isinstance(other, Poly):
                other = ExpPoly.term(other)
            else:
                try:
                    s = Scalar.coerce(other)
                except TypeError:
                    return NotImplemented
                if s.is_zero():
                    return ExpPoly()
                return ExpPoly._raw({k: v * s for k, v in self.terms.items()})
        out: dict[Poly, Poly] = {}
        for q1, p1 in self.terms.items():
            for q2, p2 in other.terms.items():
                q = q1 + q2 if not q2.is_zero() else q1
                p = p1 * p2
                prev = out.get(q)
                out[q] = p if prev is None else prev + p
        return ExpPoly._raw({k: v for k, v in out.items() if not v.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExpPoly":
        out = ExpPoly.term(1)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "ExpPoly":
        out = {}
        for q, p in self.terms.items():
            d = p.derivative() + p * q.derivative()
            if not d.is_zero():
                out[q] = d
        return ExpPoly._raw(out)

    def subs(self, mapping: Mapping[str, Scalar]) -> "ExpPoly":
        if not mapping:
            return self
        return ExpPoly((q.subs(mapping), p.subs(mapping)) for q, p in self.terms.items())

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        if len(self.terms) != 1:
            return False
        (q, p), = self.terms.items()
        return q.is_zero() and p.is_constant()

    def order(self) -> int:
        if not self.terms:
            raise ZeroFunction("order of the zero function is undefined")
        return max(max(q.degree, 0) for q in self.terms)

    def unit_names(self) -> set[str]:
        out: set[str] = set()
        for q, p in self.terms.items():
            out |= q.unit_names() | p.unit_names()
        return out

    def sorted_terms(self) -> list[tuple[Poly, Poly]]:
        def key(item):
            q, _ = item
            return (max(q.degree, -1), [c.text() for c in reversed(q.coeffs)], q.text())

        return sorted(self.terms.items(), key=key)

    def eval(self, z0, precision: int = 53, units: Mapping | None = None) -> CBall:
        """Ball enclosure of ``f(z0)``; ``z0`` may be a number or a :class:`CBall`."""
        wp = precision + 32
        with mp.workprec(wp):
            z = z0 if isinstance(z0, CBall) else CBall.exact(mpmath.mpc(z0))
            acc = CBall.exact(0)
            for q, p in self.terms.items():
                pb = p.eval_ball(z, [c.embed(wp, units) for c in p.coeffs])
                if q.is_zero():
                    acc = acc + pb
                else:
                    qb = q.eval_ball(z, [c.embed(wp, units) for c in q.coeffs])
                    acc = acc + pb * qb.exp()
            return acc

    def numeric_terms(self) -> list[tuple[list[complex], list[complex]]]:
        """``[(coeff_poly, exponent_poly), ...]`` as complex coefficient lists (low to high)."""
        return [(p.to_complex(), q.to_complex()) for q, p in self.sorted_terms()]

    # -- comparison / text -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            try:
                other = ExpPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for q, p in self.sorted_terms():
            if q.is_zero():
                parts.append(p.text())
                continue
            e = f"exp({q.text()})"
            nonzero = [c for c in p.coeffs if not c.is_zero()]
            if len(p.coeffs) == 1:
                parts.append(_term_text(p.coeffs[0], e))
            elif len(nonzero) == 1 and len(nonzero[0].terms) == 1:
                parts.append(f"{p.text()}*{e}")
            else:
                parts.append(f"({p.text()})*{e}")
        return _join_signed(parts, sep=" ")

    __str__ = text

    def __repr__(self):
        return f"ExpPoly({self.text()!r})"


Z = Poly.z()


def exp_of(exponent: Poly, coeff=1) -> ExpPoly:
    return ExpPoly.term(coeff, exponent)
