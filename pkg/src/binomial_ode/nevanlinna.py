"""Numeric Nevanlinna functionals for exponential polynomials.

Functions are evaluated in the log domain (log-sum-exp over terms) so that
radii where ``|e^{Q(z)}|`` overflows a double remain usable.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .equation import BinomialEquation, aux_pair
from .errors import ContourThroughZero, NonConvergent, PoleOnCircle, ZeroFunction
from .exppoly import ExpPoly

REL_TOL = 1e-4
NODE_CAP = 2**16
MIN_NODES = 64
DEFAULT_R_GRID = tuple(float(r) for r in np.geomspace(2.0, 50.0, 8))
# cancellation depth (nepers below the largest term) treated as an exact zero
_ZERO_GAP = 30.0


class _Numeric:
    """Vectorized ``log f(z)`` for a fixed ExpPoly with bound unit symbols."""

    def __init__(self, f: ExpPoly):
        f = ExpPoly.coerce(f)
        self.is_zero = f.is_zero()
        self.terms = [(np.array(p[::-1], dtype=complex), np.array(q[::-1], dtype=complex) if q else None)
                      for p, q in f.numeric_terms()]

    def log(self, z: np.ndarray) -> np.ndarray:
        return self.log_and_scale(z)[0]

    def vanishes_on(self, z: np.ndarray) -> bool:
        lf, top = self.log_and_scale(z)
        return bool(np.any(~np.isfinite(lf.real)) or np.any(top - lf.real > _ZERO_GAP))

    def log_and_scale(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``log f(z)`` and the largest single-term ``log|.|`` at each node."""
        if self.is_zero:
            inf = np.full(z.shape, -np.inf)
            return inf.astype(complex), inf
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = []
            for p, q in self.terms:
                lt = np.log(np.polyval(p, z).astype(complex))
                if q is not None:
                    lt = lt + np.polyval(q, z)
                logs.append(lt)
            L = np.stack(logs)
            top = L.real.max(axis=0)
            safe = np.where(np.isfinite(top), top, 0.0)
            s = np.exp(L - safe).sum(axis=0)
            return safe + np.log(s), top


def _circle(r: float, n: int) -> np.ndarray:
    return r * np.exp(2j * np.pi * np.arange(n) / n)


def _converged(val: float, prev: float) -> bool:
    err = abs(val - prev)
    return err <= REL_TOL * abs(val) or err <= 1e-12


def _log_abs_ratio(num: _Numeric, den: _Numeric | None, z: np.ndarray) -> np.ndarray:
    out = num.log(z).real
    if den is not None:
        if den.vanishes_on(z):
            raise PoleOnCircle("denominator vanishes on the circle")
        out = out - den.log(z).real
    return out


def _proximity(num: _Numeric, den: _Numeric | None, r: float, nodes: int) -> tuple[float, int, float]:
    n = max(nodes, MIN_NODES)
    prev = None
    while True:
        vals = _log_abs_ratio(num, den, _circle(r, n))
        val = float(np.mean(np.maximum(vals, 0.0)))
        if prev is not None and (_converged(val, prev) or n >= NODE_CAP):
            return val, n, abs(val - prev)
        prev = val
        n *= 2


def proximity(num, den=None, r: float = 1.0, nodes: int = MIN_NODES, *, with_error: bool = False):
    """``m(r, num/den)``: trapezoidal mean of ``log+ |num/den|`` on ``|z| = r``.

    A denominator vanishing on the circle triggers up to three radius
    perturbations before ``PoleOnCircle`` is raised.
    """
    num_n = _Numeric(num)
    den_n = None if den is None else _Numeric(den)
    for k in range(4):
        rr = r * (1 + 1e-3 * k)
        try:
            val, n, err = _proximity(num_n, den_n, rr, nodes)
            return (val, n, err) if with_error else val
        except PoleOnCircle:
            if k == 3:
                raise
    raise AssertionError("unreachable")


def mean_log_abs(f, r: float, nodes: int = MIN_NODES) -> float:
    """``(1/2pi) int log|f(r e^{i t})| dt`` (the Jensen integral)."""
    fn = _Numeric(f)
    n, prev = max(nodes, MIN_NODES), None
    while True:
        val = float(np.mean(fn.log(_circle(r, n)).real))
        if prev is not None and (_converged(val, prev) or n >= NODE_CAP):
            return val
        prev, n = val, n * 2


# -- zeros -------------------------------------------------------------------

def _count(fn: _Numeric, dfn: _Numeric, r: float, nodes: int) -> int:
    n = max(nodes, MIN_NODES)
    prev = None
    while n <= NODE_CAP:
        z = _circle(r, n)
        lf, top = fn.log_and_scale(z)
        if np.any(~np.isfinite(lf.real)) or np.any(top - lf.real > _ZERO_GAP):
            raise ContourThroughZero(f"f vanishes on |z| = {r}")
        with np.errstate(over="ignore", invalid="ignore"):
            val = float(np.mean((z * np.exp(dfn.log(z) - lf)).real))
        if np.isfinite(val) and prev is not None and abs(val - prev) < 1e-3 and abs(val - round(val)) < 0.1:
            return int(round(val))
        prev = val
        n *= 2
    raise NonConvergent(f"argument-principle integral did not settle at r = {r}")


def count_zeros(f, r: float, nodes: int = 256) -> int:
    """Number of zeros of ``f`` in ``|z| <= r`` via the argument principle."""
    f = ExpPoly.coerce(f)
    if f.is_zero():
        raise ZeroFunction("the zero function has no zero count")
    df = f.derivative()
    if df.is_zero():
        return 0
    return _count(_Numeric(f), _Numeric(df), r, nodes)


def _zero_brackets(f, r: float, nodes: int, rel_tol: float) -> list[tuple[float, float]]:
    """One ``(lo, hi)`` radius bracket per zero in ``|z| <= r`` (with multiplicity).

    Zeros inside the innermost probe radius are reported as ``(0, 0)``.
    """
    f = ExpPoly.coerce(f)
    if f.is_zero():
        raise ZeroFunction("the zero function has no zeros to locate")
    df = f.derivative()
    if df.is_zero():
        return []
    fn, dfn = _Numeric(f), _Numeric(df)

    def count(t: float, spread: float, tries=(0, 1, -1, 2, -2)) -> tuple[float, int] | None:
        # nearby radii are tried in turn when t is too close to a zero
        for k in tries:
            tt = t * (1 + spread * k)
            try:
                return tt, _count(fn, dfn, tt, nodes)
            except (ContourThroughZero, NonConvergent):
                continue
        return None

    eps = r * 1e-6
    grid = []
    for t in np.geomspace(eps, r, max(16, int(4 * math.log(r / eps)))):
        hit = count(float(t), 1e-3 if t < r else -1e-3)
        if hit is None:
            raise NonConvergent(f"zero count failed near |z| = {t}")
        grid.append(hit)
    out: list[tuple[float, float]] = [(0.0, 0.0)] * grid[0][1]

    def split(lo: float, hi: float, c_lo: int, c_hi: int) -> None:
        if c_hi == c_lo:
            return
        hit = None if hi - lo <= rel_tol * hi else count(0.5 * (lo + hi), 0.0, (0,))
        if hit is None:
            out.extend([(lo, hi)] * (c_hi - c_lo))
            return
        mid, c_mid = hit
        split(lo, mid, c_lo, c_mid)
        split(mid, hi, c_mid, c_hi)

    for (lo, c_lo), (hi, c_hi) in zip(grid, grid[1:]):
        split(lo, hi, c_lo, c_hi)
    return sorted(out)


def zero_moduli(f, r: float, nodes: int = 256, rel_tol: float = 1e-5) -> list[float]:
    """Moduli of the zeros in ``|z| <= r`` (with multiplicity), located by bisection on the count.

    Each modulus is the midpoint of a bracket of relative width about
    ``rel_tol``, or of the last bracket whose midpoint still gave a convergent
    count. A probe within roughly ``r / NODE_CAP`` of a zero does not
    converge, so zeros near a probe are known to about ``1e-3`` relative.
    """
    return [0.5 * (lo + hi) for lo, hi in _zero_brackets(f, r, nodes, rel_tol)]


def _N_from_moduli(moduli: Sequence[float], r: float) -> float:
    total = 0.0
    for m in moduli:
        if m <= r:
            total += math.log(r) if m == 0.0 else math.log(r / m)
    return total


def N_of(f, r: float, nodes: int = 256, *, with_error: bool = False):
    """Counting function ``N(r, 1/f) = sum log(r/|z_k|) + n(0) log r``.

    With ``with_error=True`` returns ``(N, error_bound)`` where the bound sums
    ``log(hi/lo)`` over the final radius bracket of every zero.
    """
    brackets = _zero_brackets(f, r, nodes, 1e-5)
    value = _N_from_moduli([0.5 * (lo + hi) for lo, hi in brackets], r)
    if not with_error:
        return value
    return value, sum(math.log(hi / lo) for lo, hi in brackets if lo > 0)


# -- characteristic and growth ---------------------------------------------------

@dataclass(frozen=True)
class CharacteristicSample:
    r: float
    m: float
    N: float
    T: float
    quad_nodes: int
    error_bound: float


def characteristic(f, r: float, nodes: int = MIN_NODES) -> CharacteristicSample:
    """``T(r, f) = m(r, f)`` for entire ``f`` (no poles, so ``N(r, f) = 0``)."""
    m, n, err = proximity(f, None, r, nodes, with_error=True)
    return CharacteristicSample(r=r, m=m, N=0.0, T=m, quad_nodes=n, error_bound=err)


@dataclass(frozen=True)
class GrowthFit:
    rho_hat: float
    lambda_hat: float
    r_grid: tuple[float, ...]
    residual: float

    def to_record(self) -> dict:
        return {"rho_hat": self.rho_hat, "lambda_hat": self.lambda_hat, "residual": self.residual,
                "r_grid": list(self.r_grid)}


def _slope(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    x, y = np.asarray(xs), np.asarray(ys)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return float(coef[0]), resid


def estimate_growth(f, r_grid: Iterable[float] = DEFAULT_R_GRID, nodes: int = MIN_NODES) -> GrowthFit:
    """Log-log slopes of ``T(r, f)`` and ``N(r, 1/f)`` over ``r_grid``.

    The regression uses the radii at or above the grid median, where the
    bounded lower-order part of ``T`` and ``N`` no longer dominates the slope.
    ``lambda_hat`` is 0 when no zero has modulus in that upper range.
    """
    grid = tuple(sorted(float(r) for r in r_grid))
    if len(grid) < 5 or grid[-1] < 10 * grid[0] * 0.999:
        raise ValueError("r_grid needs at least 5 radii spanning a decade")
    f = ExpPoly.coerce(f)
    upper = grid[(len(grid) - 1) // 2:]
    Ts = [characteristic(f, r, nodes).T for r in upper]
    logr = [math.log(r) for r in upper]
    pos = [(lr, math.log(t)) for lr, t in zip(logr, Ts) if t > 0]
    rho, resid = _slope(*zip(*pos)) if len(pos) >= 2 else (0.0, 0.0)
    moduli = zero_moduli(f, grid[-1], max(nodes, 256))
    if not any(upper[0] < m <= upper[-1] for m in moduli):
        lam = 0.0
    else:
        Ns = [_N_from_moduli(moduli, r) for r in upper]
        ptsN = [(lr, math.log(n)) for lr, n in zip(logr, Ns) if n > 0]
        lam = _slope(*zip(*ptsN))[0] if len(ptsN) >= 2 else 0.0
    return GrowthFit(rho_hat=rho, lambda_hat=lam, r_grid=grid, residual=resid)


def samples_to_csv(samples: Iterable[CharacteristicSample]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "m", "N", "T", "error_bound"])
    for s in samples:
        writer.writerow([f"{s.r:.6g}", f"{s.m:.10g}", f"{s.N:.10g}", f"{s.T:.10g}", f"{s.error_bound:.3g}"])
    return buf.getvalue()


def sample_record(s: CharacteristicSample) -> dict:
    return asdict(s)


def small_function_score(eq: BinomialEquation, f, r_grid: Iterable[float] = DEFAULT_R_GRID,
                         nodes: int = MIN_NODES) -> float:
    """Heuristic confidence in ``[0, 1]`` that ``m(r, f'/(h f' - a c f''))`` is small next to ``T(r, f)``.

    The score compares the growth of the proximity term to that of
    ``T(r, f)`` on a finite grid; it is a hint, never a verdict.
    """
    f = ExpPoly.coerce(f)
    f1 = f.derivative()
    h = aux_pair(eq, check=False).h
    den = ExpPoly.coerce(h) * f1 - ExpPoly.coerce(eq.a * eq.c) * f1.derivative()
    grid = tuple(sorted(float(r) for r in r_grid))
    ms = [proximity(f1, den, r, nodes) for r in grid]
    Ts = [characteristic(f, r, nodes).T for r in grid]
    ratio = ms[-1] / Ts[-1] if Ts[-1] > 0 else 0.0
    return float(min(1.0, max(0.0, 1.0 - ratio)))
