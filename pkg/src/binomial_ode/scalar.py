"""Exact constants: a triangular algebraic tower over Q with formal unit symbols.

A :class:`Scalar` is a finite sum ``q * g_0^e_0 ... g_k^e_k * u_1^m_1 ...``
where ``q`` is a :class:`fractions.Fraction`, ``g_i`` are tower generators
(every ``e_i`` reduced below the degree of its defining polynomial) and
``u_j`` are unit symbols with integer, possibly negative, exponents.

The defining polynomial of generator ``k`` is monic with coefficients over
generators ``0..k-1``; rewriting the top power is therefore confluent and
the reduced term map is a canonical form.  Defining polynomials are not
required to be irreducible: :meth:`Scalar.inverse` raises
:class:`~binomial_ode.errors.ZeroDivisor` when it meets a zero divisor.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

import mpmath
from mpmath import mp

from .ball import CBall
from .errors import (
    DivisionByZero,
    IncompatibleTower,
    NonIsolating,
    NonMonic,
    NotInvertible,
    TowerError,
    UnboundUnit,
    ZeroDivisor,
)

Rational = Fraction

# term key: (tower exponents with trailing zeros stripped, sorted ((unit, exp), ...))
Key = tuple


class UnitSymbol:
    """Formal invertible constant such as ``e^{c2}``.

    Identity is the name alone.  ``value`` is an optional numeric binding:
    a number, or a zero-argument callable evaluated at the current mpmath
    precision (used for exact transcendental constants like ``e``).
    """

    __slots__ = ("name", "value")

    def __init__(self, name: str, value=None):
        self.name = name
        self.value = value

    def __eq__(self, other):
        return isinstance(other, UnitSymbol) and other.name == self.name

    def __lt__(self, other):
        return self.name < other.name

    def __hash__(self):
        return hash(("unit", self.name))

    def __repr__(self):
        return f"UnitSymbol({self.name!r})"

    def numeric(self) -> mpmath.mpc:
        if self.value is None:
            raise UnboundUnit(f"unit symbol {self.name!r} has no numeric value")
        v = self.value() if callable(self.value) else self.value
        if isinstance(v, Fraction):
            return mpmath.mpc(mpmath.mpf(v.numerator) / v.denominator)
        return mpmath.mpc(v)


def exp_unit(q: Fraction) -> tuple[UnitSymbol, int]:
    """Unit symbol and exponent representing ``e^q`` for rational ``q``.

    Integers share the symbol ``e``; other rationals use ``e^(1/den)``.
    Relations across different denominators are not tracked.
    """
    q = Fraction(q)
    if q.denominator == 1:
        return UnitSymbol("e", lambda: mpmath.e), q.numerator
    den = q.denominator
    return UnitSymbol(f"e_{den}", lambda: mpmath.exp(mpmath.mpf(1) / den)), q.numerator


def _mul_units(u1: tuple, u2: tuple) -> tuple:
    if not u1:
        return u2
    if not u2:
        return u1
    d = dict(u1)
    for s, e in u2:
        n = d.get(s, 0) + e
        if n:
            d[s] = n
        else:
            del d[s]
    return tuple(sorted(d.items(), key=lambda it: it[0].name))


def _strip(exps) -> tuple:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def _add_exps(e1: tuple, e2: tuple) -> tuple:
    if len(e1) < len(e2):
        e1, e2 = e2, e1
    out = list(e1)
    for i, e in enumerate(e2):
        out[i] += e
    return tuple(out)


class TowerGenerator:
    """Root of a monic ``defining_poly`` (coefficients low to high, over the lower tower)."""

    __slots__ = ("name", "defining_poly", "hint_mid", "hint_rad")

    def __init__(self, name: str, defining_poly: Sequence["Scalar"], hint_mid: complex, hint_rad: float):
        self.name = name
        self.defining_poly = tuple(defining_poly)
        self.hint_mid = complex(hint_mid)
        self.hint_rad = float(hint_rad)

    @property
    def degree(self) -> int:
        return len(self.defining_poly) - 1

    def _ident(self):
        return (self.name, self.defining_poly)

    def __eq__(self, other):
        return isinstance(other, TowerGenerator) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        return f"TowerGenerator({self.name!r}, {poly_text(self.defining_poly, 't')})"


class Tower:
    """Ordered, immutable list of generators; each relation uses only earlier ones."""

    def __init__(self, generators: Iterable[TowerGenerator] = ()):
        self.generators = tuple(generators)
        self.degrees = tuple(g.degree for g in self.generators)
        self._tails = None
        self._numeric_cache: dict = {}

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        return isinstance(other, Tower) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return f"Tower({[g.name for g in self.generators]})"

    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def gen(self, name_or_index) -> "Scalar":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        exps = (0,) * i + (1,)
        return Scalar._raw({(exps, ()): Fraction(1)}, self)

    def is_prefix_of(self, other: "Tower") -> bool:
        n = len(self.generators)
        if n > len(other.generators):
            return False
        return all(a is b or a == b for a, b in zip(self.generators, other.generators))

    def prefix(self, n: int) -> "Tower":
        return Tower(self.generators[:n])

    def find(self, coeffs: Sequence) -> int | None:
        """Index of a generator whose defining polynomial equals ``coeffs``."""
        target = tuple(Scalar.coerce(c) for c in coeffs)
        for i, g in enumerate(self.generators):
            if g.defining_poly == target:
                return i
        return None

    # -- reduction ---------------------------------------------------------

    def _reduction_tails(self):
        if self._tails is None:
            tails = []
            for j, g in enumerate(self.generators):
                tail = []
                for i, c in enumerate(g.defining_poly[:-1]):
                    for (tex, un), q in c.terms.items():
                        if len(tex) > j:
                            raise TowerError(f"relation for {g.name} uses a later generator")
                        ex = list(tex) + [0] * (j - len(tex)) + [i]
                        tail.append((_strip(ex), un, -q))
                tails.append(tail)
            self._tails = tails
        return self._tails

    def reduce_terms(self, raw: Mapping) -> dict:
        degs = self.degrees
        if not degs:
            return {k: v for k, v in raw.items() if v}
        tails = self._reduction_tails()
        out: dict = {}
        stack = list(raw.items())
        while stack:
            (tex, un), c = stack.pop()
            if not c:
                continue
            j = -1
            for i in range(min(len(tex), len(degs)) - 1, -1, -1):
                if tex[i] >= degs[i]:
                    j = i
                    break
            if len(tex) > len(degs):
                raise IncompatibleTower("term uses generators outside the tower")
            if j < 0:
                key = (tex, un)
                out[key] = out.get(key, 0) + c
                continue
            base = list(tex)
            base[j] -= degs[j]
            base = tuple(base)
            for ttex, tun, tq in tails[j]:
                stack.append(((_strip(_add_exps(base, ttex)), _mul_units(un, tun)), c * tq))
        return {k: v for k, v in out.items() if v}

    def basis(self, depth: int | None = None) -> list[tuple]:
        degs = self.degrees if depth is None else self.degrees[:depth]
        return [_strip(e) for e in product(*(range(d) for d in degs))]

    # -- numerics ----------------------------------------------------------

    def numeric_generators(self, depth: int) -> list[CBall]:
        """Ball enclosures of the first ``depth`` generators at the current mp precision."""
        key = (depth, mp.prec)
        hit = self._numeric_cache.get(key)
        if hit is not None:
            return hit
        vals: list[CBall] = []
        for j in range(depth):
            g = self.generators[j]
            coeffs = [c._embed_with(vals) for c in g.defining_poly]
            vals.append(_refine_root(coeffs, g))
        self._numeric_cache[key] = vals
        return vals

    # -- serialization -----------------------------------------------------

    def describe(self) -> list[dict]:
        return [
            {
                "name": g.name,
                "defining_poly": poly_text(g.defining_poly, "t"),
                "midpoint": [g.hint_mid.real, g.hint_mid.imag],
                "radius": g.hint_rad,
            }
            for g in self.generators
        ]

    @classmethod
    def from_descriptor(cls, records: Iterable[Mapping]) -> "Tower":
        from .frontend.parser import parse_poly

        tower = EMPTY_TOWER
        for rec in records:
            poly = parse_poly(rec["defining_poly"], tower=tower, variable="t")
            mid = complex(*rec["midpoint"])
            tower = tower_extend(tower, poly.coeffs, (mid, rec["radius"]), name=rec["name"])
        return tower


EMPTY_TOWER = Tower()


def _poly_ball_eval(coeffs: Sequence[CBall], x: CBall) -> CBall:
    acc = CBall.exact(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _refine_root(coeffs: Sequence[CBall], g: TowerGenerator) -> CBall:
    mids = [c.mid for c in coeffs]
    n = len(mids) - 1
    dmids = [i * mids[i] for i in range(1, n + 1)]
    x = mpmath.mpc(g.hint_mid)
    tol = mpmath.ldexp(1, 8 - mp.prec)
    for _ in range(200):
        px = mpmath.polyval(mids[::-1], x)
        dpx = mpmath.polyval(dmids[::-1], x)
        if dpx == 0:
            break
        step = px / dpx
        x -= step
        if abs(step) <= tol * max(abs(x), 1):
            break
    px = _poly_ball_eval(coeffs, CBall.exact(x))
    dpx = mpmath.polyval(dmids[::-1], x)
    if dpx == 0:
        raise NonIsolating(f"multiple root for generator {g.name}")
    # a disc of radius n|p(x)/p'(x)| around x contains a root of p
    rad = n * (abs(px.mid) + px.rad) / abs(dpx)
    if abs(x - g.hint_mid) > g.hint_rad:
        raise NonIsolating(f"Newton iteration for {g.name} left the hint disc")
    return CBall(x, rad + abs(x) * mpmath.ldexp(1, 1 - mp.prec))


def tower_extend(tower: Tower, defining_poly: Sequence, embedding_hint, name: str | None = None) -> Tower:
    """Append a generator with monic ``defining_poly`` (low to high coefficients).

    ``embedding_hint`` is ``(midpoint, radius)``; the disc must contain exactly
    one root of the polynomial.
    """
    coeffs = [Scalar.coerce(c) for c in defining_poly]
    if len(coeffs) < 3:
        raise NonMonic("defining polynomial must have degree >= 2")
    if coeffs[-1] != 1:
        raise NonMonic(f"leading coefficient {coeffs[-1]} is not 1")
    for c in coeffs:
        if c.tower_depth() and not c.tower.prefix(c.tower_depth()).is_prefix_of(tower):
            raise IncompatibleTower("defining polynomial is not over the given tower")
        if c.unit_names():
            raise TowerError("defining polynomial may not involve unit symbols")
    lowered = tuple(Scalar._raw(c.terms, tower) for c in coeffs)
    if name is None:
        name = f"g{len(tower)}"
    if name in tower.names():
        raise TowerError(f"generator name {name!r} already in tower")
    mid, rad = embedding_hint
    mid = complex(mid)
    rad = float(rad)
    with mp.workprec(96):
        gens = tower.numeric_generators(len(tower))
        numeric = [complex(c._embed_with(gens).mid) for c in lowered]
        roots = mpmath.polyroots(numeric[::-1], maxsteps=200, extraprec=200)
    inside = [r for r in roots if abs(complex(r) - mid) <= rad]
    if len(inside) != 1:
        raise NonIsolating(f"hint disc contains {len(inside)} roots")
    return Tower(tower.generators + (TowerGenerator(name, lowered, mid, rad),))


def poly_text(coeffs: Sequence["Scalar"], var: str) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Scalar.coerce(coeffs[i])
        if c.is_zero():
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        parts.append(_term_text(c, mono))
    return _join_signed(parts) if parts else "0"


def _join_signed(parts: list[str], sep: str = "+") -> str:
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += f"-{p[1:]}" if sep == "+" else f" - {p[1:]}"
        else:
            out += f"+{p}" if sep == "+" else f" + {p}"
    return out


def _term_text(c: "Scalar", mono: str) -> str:
    """Render ``c * mono``; ``c`` is parenthesized when it is a sum."""
    if not mono:
        return c.text()
    if c == 1:
        return mono
    if c == -1:
        return f"-{mono}"
    if len(c.terms) == 1:
        return f"{c.text()}*{mono}"
    return f"({c.text()})*{mono}"


class Scalar:
    """Immutable element of ``Q(tower)[units, units^-1]`` in normal form."""

    __slots__ = ("terms", "tower", "_hash")

    def __init__(self, value=0, tower: Tower = EMPTY_TOWER):
        q = Fraction(value)
        self.terms = {((), ()): q} if q else {}
        self.tower = tower
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, tower: Tower) -> "Scalar":
        s = cls.__new__(cls)
        s.terms = terms
        s.tower = tower
        s._hash = None
        return s

    @classmethod
    def from_terms(cls, raw: Mapping, tower: Tower = EMPTY_TOWER) -> "Scalar":
        """Build from an unreduced ``{(tower_exps, units): rational}`` map."""
        norm = {}
        for (tex, un), q in raw.items():
            un = tuple(sorted(((s, e) for s, e in un if e), key=lambda it: it[0].name))
            key = (_strip(tex), un)
            norm[key] = norm.get(key, 0) + Fraction(q)
        return cls._raw(tower.reduce_terms(norm), tower)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, str):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    @classmethod
    def unit(cls, symbol: UnitSymbol | str, exponent: int = 1, value=None) -> "Scalar":
        if isinstance(symbol, str):
            symbol = UnitSymbol(symbol, value)
        if exponent == 0:
            return cls(1)
        return cls._raw({((), ((symbol, exponent),)): Fraction(1)}, EMPTY_TOWER)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def tower_depth(self) -> int:
        return max((len(tex) for tex, _ in self.terms), default=0)

    def unit_names(self) -> set[str]:
        return {s.name for _, un in self.terms for s, _ in un}

    def unit_symbols(self) -> dict[str, UnitSymbol]:
        return {s.name: s for _, un in self.terms for s, _ in un}

    def is_rational(self) -> bool:
        return all(not tex and not un for tex, un in self.terms)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.terms.get(((), ()), Fraction(0))

    def unit_monomials(self) -> set[tuple]:
        return {un for _, un in self.terms}

    def in_tower(self, tower: Tower) -> "Scalar":
        """Reinterpret in ``tower`` (which must extend the generators this scalar uses)."""
        d = self.tower_depth()
        if d and not self.tower.prefix(d).is_prefix_of(tower):
            raise IncompatibleTower(f"{self.tower!r} vs {tower!r}")
        return Scalar._raw(self.terms, tower)

    # -- arithmetic --------------------------------------------------------

    def _common(self, other: "Scalar") -> Tower:
        t1, t2 = self.tower, other.tower
        if t1 is t2:
            return t1
        if len(t1) < len(t2):
            t1, t2 = t2, t1
            s_long, s_short = other, self
        else:
            s_long, s_short = self, other
        d = s_short.tower_depth()
        if t2.is_prefix_of(t1) or (d == 0) or t2.prefix(d).is_prefix_of(t1):
            return t1
        raise IncompatibleTower(f"{t1!r} vs {t2!r}")

    def __add__(self, other) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        tower = self._common(other)
        if not other.terms:
            return Scalar._raw(self.terms, tower)
        out = dict(self.terms)
        for k, v in other.terms.items():
            n = out.get(k, 0) + v
            if n:
                out[k] = n
            else:
                out.pop(k, None)
        return Scalar._raw(out, tower)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({k: -v for k, v in self.terms.items()}, self.tower)

    def __sub__(self, other) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        tower = self._common(other)
        if not self.terms or not other.terms:
            return Scalar._raw({}, tower)
        raw: dict = {}
        needs_reduce = False
        degs = tower.degrees
        for (t1, u1), q1 in self.terms.items():
            for (t2, u2), q2 in other.terms.items():
                tex = _add_exps(t1, t2) if t2 else t1
                if not needs_reduce and any(e >= degs[i] for i, e in enumerate(tex)):
                    needs_reduce = True
                key = (tex, _mul_units(u1, u2))
                raw[key] = raw.get(key, 0) + q1 * q2
        if needs_reduce:
            return Scalar._raw(tower.reduce_terms(raw), tower)
        return Scalar._raw({k: v for k, v in raw.items() if v}, tower)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar(1, self.tower)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self) -> "Scalar":
        if not self.terms:
            raise DivisionByZero("inverse of zero")
        monos = self.unit_monomials()
        if len(monos) != 1:
            raise NotInvertible(f"{self} is not a unit: it mixes several unit-symbol monomials")
        (un,) = monos
        inv_units = tuple((s, -e) for s, e in un)
        part = {tex: q for (tex, _), q in self.terms.items()}
        depth = max(len(t) for t in part)
        if depth == 0:
            q = part[()]
            return Scalar._raw({((), inv_units): 1 / q}, self.tower)
        tower = self.tower
        basis = tower.basis(depth)
        index = {b: i for i, b in enumerate(basis)}
        elem = Scalar._raw({(t, ()): q for t, q in part.items()}, tower)
        cols = []
        for b in basis:
            prod_ = elem * Scalar._raw({(b, ()): Fraction(1)}, tower)
            col = [Fraction(0)] * len(basis)
            for (tex, _), q in prod_.terms.items():
                col[index[tex]] = q
            cols.append(col)
        n = len(basis)
        matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [Fraction(0)] * n
        rhs[index[()]] = Fraction(1)
        x = _solve_rational(matrix, rhs)
        if x is None:
            raise ZeroDivisor(f"{self} is a zero divisor in {tower!r}")
        terms = {(b, inv_units): x[i] for i, b in enumerate(basis) if x[i]}
        return Scalar._raw(terms, tower)

    def subs(self, mapping: Mapping[str, "Scalar"]) -> "Scalar":
        """Replace unit symbols by scalars (negative powers invert the replacement)."""
        if not mapping or not (self.unit_names() & mapping.keys()):
            return self
        out = Scalar(0, self.tower)
        cache: dict = {}
        for (tex, un), q in self.terms.items():
            keep = tuple((s, e) for s, e in un if s.name not in mapping)
            term = Scalar._raw({(tex, keep): q}, self.tower)
            for s, e in un:
                if s.name in mapping:
                    key = (s.name, e)
                    if key not in cache:
                        cache[key] = Scalar.coerce(mapping[s.name]) ** e
                    term = term * cache[key]
            out = out + term
        return out

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        elif not isinstance(other, Scalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- numerics ----------------------------------------------------------

    def _embed_with(self, gens: Sequence[CBall], units: Mapping | None = None) -> CBall:
        acc = CBall.exact(0)
        unit_cache: dict = {}
        for (tex, un), q in self.terms.items():
            if q.denominator == 1:
                term = CBall.exact(q.numerator)
            else:
                m = mpmath.mpf(q.numerator) / q.denominator
                term = CBall(mpmath.mpc(m), abs(m) * mpmath.ldexp(1, 1 - mp.prec))
            for i, e in enumerate(tex):
                if e:
                    term = term * gens[i] ** e
            for s, e in un:
                if s.name not in unit_cache:
                    if units is not None and s.name in units:
                        unit_cache[s.name] = CBall.exact(mpmath.mpc(units[s.name]))
                    else:
                        v = s.numeric()
                        unit_cache[s.name] = CBall(v, abs(v) * mpmath.ldexp(1, 1 - mp.prec))
                term = term * unit_cache[s.name] ** e
            acc = acc + term
        return acc

    def embed(self, precision: int = 53, units: Mapping | None = None) -> CBall:
        """Ball around the value with radius <= 2^-precision * |midpoint|."""
        if not self.terms:
            return CBall.exact(0)
        for s in self.unit_symbols().values():
            if s.value is None and not (units and s.name in units):
                raise UnboundUnit(f"unit symbol {s.name!r} has no numeric value")
        wp = precision + 32
        depth = self.tower_depth()
        for _ in range(8):
            with mp.workprec(wp):
                gens = self.tower.numeric_generators(depth)
                val = self._embed_with(gens, units)
                if val.rad <= abs(val.mid) * mpmath.ldexp(1, -precision):
                    return val
            wp *= 2
        return val

    def __complex__(self) -> complex:
        return complex(self.embed(53).mid)

    # -- text --------------------------------------------------------------

    def _sorted_terms(self):
        def key(item):
            (tex, un), _ = item
            return (
                sum(abs(e) for _, e in un),
                sum(tex),
                tex,
                tuple((s.name, e) for s, e in un),
            )

        return sorted(self.terms.items(), key=key)

    def text(self) -> str:
        if not self.terms:
            return "0"
        names = self.tower.names()
        parts = []
        for (tex, un), q in self._sorted_terms():
            factors = []
            for i, e in enumerate(tex):
                if e:
                    factors.append(names[i] if e == 1 else f"{names[i]}^{e}")
            for s, e in un:
                factors.append(s.name if e == 1 else f"{s.name}^{e}")
            mono = "*".join(factors)
            qs = str(q)
            if not mono:
                parts.append(qs)
            elif q == 1:
                parts.append(mono)
            elif q == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{qs}*{mono}")
        return _join_signed(parts, sep=" ")

    __str__ = text

    def __repr__(self):
        return f"Scalar({self.text()!r})"


def _solve_rational(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over Q; ``None`` if singular."""
    n = len(matrix)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


# -- convenience ------------------------------------------------------------

def reduce(expression) -> Scalar:
    """Normal form of a +,-,* combination; arithmetic already reduces eagerly."""
    return Scalar.coerce(expression)


def invert(s) -> Scalar:
    return Scalar.coerce(s).inverse()


def embed(s, precision: int = 53, units: Mapping | None = None) -> CBall:
    return Scalar.coerce(s).embed(precision, units)


def omega_tower(tower: Tower = EMPTY_TOWER, name: str = "w") -> tuple[Tower, Scalar]:
    """Return ``tower`` with a primitive cube root of unity, reusing one if present."""
    idx = tower.find([1, 1, 1])
    if idx is not None:
        return tower, tower.gen(idx)
    taken = set(tower.names())
    while name in taken:
        name += "'"
    ext = tower_extend(tower, [1, 1, 1], (complex(-0.5, math.sqrt(3) / 2), 0.01), name=name)
    return ext, ext.gen(name)


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def as_scalar_map(values: Mapping[str, object]) -> dict[str, Scalar]:
    return {k: Scalar.coerce(v) for k, v in values.items()}


ScalarLike = Scalar | int | Fraction
UnitValue = complex | Callable[[], complex]
