"""Midpoint-radius complex intervals on top of mpmath.

Every operation widens the radius by one rounding unit of the current
working precision, so a ball computed under ``mpmath.mp.workprec(p)``
encloses the exact result of the same operations on the enclosed values.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp


def _ulp(x) -> mpmath.mpf:
    return abs(x) * mpmath.ldexp(1, 1 - mp.prec)


@dataclass(frozen=True)
class CBall:
    mid: mpmath.mpc
    rad: mpmath.mpf

    @classmethod
    def exact(cls, value) -> "CBall":
        return cls(mpmath.mpc(value), mpmath.mpf(0))

    @classmethod
    def around(cls, value, rad) -> "CBall":
        return cls(mpmath.mpc(value), mpmath.mpf(rad))

    def __add__(self, other) -> "CBall":
        other = _coerce(other)
        m = self.mid + other.mid
        return CBall(m, self.rad + other.rad + _ulp(m))

    __radd__ = __add__

    def __neg__(self) -> "CBall":
        return CBall(-self.mid, self.rad)

    def __sub__(self, other) -> "CBall":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "CBall":
        return _coerce(other) - self

    def __mul__(self, other) -> "CBall":
        other = _coerce(other)
        m = self.mid * other.mid
        r = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
        return CBall(m, r + _ulp(m))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CBall":
        if n < 0:
            return self.inverse() ** (-n)
        out = CBall.exact(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "CBall":
        am = abs(self.mid)
        if am <= self.rad:
            raise ZeroDivisionError("ball contains zero")
        m = 1 / self.mid
        # |1/x - 1/m| <= r / (|m| (|m| - r))
        return CBall(m, self.rad / (am * (am - self.rad)) + _ulp(m))

    def exp(self) -> "CBall":
        m = mpmath.exp(self.mid)
        return CBall(m, abs(m) * mpmath.expm1(self.rad) + _ulp(m))

    def contains(self, value, slack=0) -> bool:
        return abs(mpmath.mpc(value) - self.mid) <= self.rad + slack

    def contains_ball(self, other: "CBall") -> bool:
        return abs(other.mid - self.mid) + other.rad <= self.rad

    def overlaps(self, other: "CBall") -> bool:
        return abs(other.mid - self.mid) <= self.rad + other.rad

    def __complex__(self) -> complex:
        return complex(self.mid)

    def __repr__(self) -> str:
        return f"CBall({mpmath.nstr(self.mid, 15)} +/- {mpmath.nstr(self.rad, 3)})"


def _coerce(x) -> CBall:
    return x if isinstance(x, CBall) else CBall.exact(x)
