"""The four binomial equation shapes and their exact residuals."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable

from .errors import ConstantExponent, DegenerateCoefficients, ShapeMismatch, VanishingAux
from .exppoly import ExpPoly, Poly, _exp_constant_unit
from .scalar import EMPTY_TOWER, Scalar, Tower


class Shape(enum.Enum):
    E11 = "E11"  # f f'' - a (f')^2 = b e^{2c}
    E12 = "E12"  # a f f'' - b (f')^2 = c e^{2d}
    E13 = "E13"  # a f f' - b (f'')^2 = c e^{2d}
    E14 = "E14"  # a f' f'' - b f^2 = c e^{2d}

    @property
    def slot(self) -> str:
        return "eq" + self.value[1:]


def common_tower(scalars: Iterable[Scalar]) -> Tower:
    best = EMPTY_TOWER
    for s in scalars:
        t = s.tower
        if len(t) > len(best):
            best = t
    return best


@dataclass(frozen=True)
class BinomialEquation:
    """``a W1(f) - b W2(f) = rhs_unit * c * e^{2d}`` with ``d(0) = 0``.

    Equation (1.1)-style input is stored as ``E12`` with ``a = 1`` and
    ``origin = Shape.E11``.
    """

    shape: Shape
    a: Poly
    b: Poly
    c: Poly
    d: Poly
    rhs_unit: Scalar = field(default_factory=lambda: Scalar(1))
    d_shift: Scalar = field(default_factory=lambda: Scalar(0))
    degenerate: bool = False
    origin: Shape | None = None

    @property
    def C(self) -> Poly:
        """Right-hand coefficient including the unit factor."""
        return self.c * self.rhs_unit

    @property
    def label(self) -> Shape:
        return self.origin or self.shape

    @property
    def tower(self) -> Tower:
        return common_tower(
            s for p in (self.a, self.b, self.c, self.d) for s in p.coeffs
        )

    def lhs(self, f: ExpPoly) -> ExpPoly:
        f = ExpPoly.coerce(f)
        a, b = ExpPoly.coerce(self.a), ExpPoly.coerce(self.b)
        f1 = f.derivative()
        if self.shape is Shape.E12:
            f2 = f1.derivative()
            return a * f * f2 - b * f1 * f1
        if self.shape is Shape.E13:
            f2 = f1.derivative()
            return a * f * f1 - b * f2 * f2
        f2 = f1.derivative()
        return a * f1 * f2 - b * f * f

    def rhs(self) -> ExpPoly:
        return ExpPoly.term(self.C, self.d * 2)

    def with_c(self, c: Poly) -> "BinomialEquation":
        return replace(self, c=Poly.coerce(c))

    def coefficient_text(self) -> dict[str, str]:
        d_raw = self.d + Poly.const(self.d_shift)
        if self.origin is Shape.E11:
            return {"a": self.b.text(), "b": self.c.text(), "c": d_raw.text()}
        return {"a": self.a.text(), "b": self.b.text(), "c": self.c.text(), "d": d_raw.text()}

    def text(self) -> str:
        slots = "; ".join(f"{k}={v}" for k, v in self.coefficient_text().items())
        return f"{self.label.slot}: {slots}"

    __str__ = text


def build_equation(shape: Shape, a, b, c, d_raw=None, *, degenerate: bool = False) -> BinomialEquation:
    """Normalize coefficients into a :class:`BinomialEquation`.

    For ``Shape.E11`` the arguments follow ``f f'' - a (f')^2 = b e^{2c}``
    and ``d_raw`` must be omitted.
    """
    if shape is Shape.E11:
        if d_raw is not None:
            raise ValueError("E11 takes (a, b, c) with c the exponent polynomial")
        eq = build_equation(Shape.E12, 1, a, b, c, degenerate=True)
        if Poly.coerce(b).is_zero():
            raise DegenerateCoefficients("E11 requires b != 0")
        return replace(eq, origin=Shape.E11, degenerate=False)
    a, b, c, d_raw = (Poly.coerce(x) for x in (a, b, c, d_raw))
    if d_raw.is_constant():
        raise ConstantExponent(f"exponent polynomial {d_raw} is constant")
    if not degenerate and (a.is_zero() or b.is_zero() or c.is_zero()):
        raise DegenerateCoefficients("a*b*c vanishes identically; pass degenerate=True for the remark cases")
    d0 = d_raw.constant_term()
    unit = Scalar(1)
    if not d0.is_zero():
        half = _exp_constant_unit(d0)
        unit = half * half
    return BinomialEquation(
        shape=shape,
        a=a,
        b=b,
        c=c,
        d=d_raw.without_constant(),
        rhs_unit=unit,
        d_shift=d0,
        degenerate=a.is_zero() or b.is_zero() or c.is_zero(),
    )


def residual(eq: BinomialEquation, f) -> ExpPoly:
    """Exact ``LHS(f) - rhs_unit * c * e^{2d}``."""
    return eq.lhs(ExpPoly.coerce(f)) - eq.rhs()


def verify(eq: BinomialEquation, f) -> bool:
    return residual(eq, f).is_zero()


@dataclass(frozen=True)
class AuxPair:
    h: Poly
    s: Poly


def aux_pair(eq: BinomialEquation, check: bool = True) -> AuxPair:
    """``h = ac' - a'c + 2acd'`` and ``s = b'c - bc' - 2bcd'``."""
    a, b, c, d = eq.a, eq.b, eq.c, eq.d
    d1 = d.derivative()
    h = a * c.derivative() - a.derivative() * c + a * c * d1 * 2
    s = b.derivative() * c - b * c.derivative() - b * c * d1 * 2
    if check and not (a.is_zero() or b.is_zero() or c.is_zero()):
        if h.is_zero():
            raise VanishingAux(f"h vanishes for {eq}")
        if s.is_zero():
            raise VanishingAux(f"s vanishes for {eq}")
    return AuxPair(h, s)


class Branch(enum.Enum):
    CaseI = "CaseI"
    CaseII_or_III = "CaseII_or_III"


def theorem1_branch(eq: BinomialEquation, f) -> Branch:
    """``CaseI`` iff ``h f' - a c f''`` vanishes identically."""
    if eq.shape is not Shape.E13:
        raise ShapeMismatch("the Theorem 1 branch test applies to E13 only")
    f = ExpPoly.coerce(f)
    h = aux_pair(eq, check=False).h
    f1 = f.derivative()
    expr = ExpPoly.coerce(h) * f1 - ExpPoly.coerce(eq.a * eq.c) * f1.derivative()
    return Branch.CaseI if expr.is_zero() else Branch.CaseII_or_III
