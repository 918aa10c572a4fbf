"""Numeric kernels: adaptive quadrature, monotone inversion, central
differences and sampled monotonicity checks.

All routines are pure functions of their arguments.
"""

from __future__ import annotations

import heapq
import math
import sys
from dataclasses import dataclass
from typing import Callable

from .errors import (
    ConfigurationError,
    ConvergenceError,
    EvaluationDomainError,
    ImageRangeError,
    NotMonotoneError,
)

RealFunction = Callable[[float], float]

EPS = sys.float_info.epsilon

INCREASING = "increasing"
DECREASING = "decreasing"
NOT_MONOTONE = "not-monotone"


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with finite endpoints and ``lo < hi``."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConfigurationError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise ConfigurationError(f"interval must satisfy lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return self.lo + 0.5 * (self.hi - self.lo)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: Interval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def clip(self, x: float) -> float:
        return min(max(x, self.lo), self.hi)

    def linspace(self, n: int) -> list[float]:
        """``n`` equispaced points including both endpoints."""
        step = (self.hi - self.lo) / (n - 1)
        pts = [self.lo + i * step for i in range(n - 1)]
        pts.append(self.hi)
        return pts

    def __str__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_iterations: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise ConfigurationError(f"abs_tol must be positive and finite, got {self.abs_tol}")
        if not (self.rel_tol >= 0 and math.isfinite(self.rel_tol)):
            raise ConfigurationError(f"rel_tol must be non-negative, got {self.rel_tol}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ConfigurationError(f"max_iterations must be a positive integer, got {self.max_iterations}")

    def x_tol(self, x: float) -> float:
        """Absolute step tolerance at location ``x``."""
        return self.abs_tol + self.rel_tol * abs(x)

    @classmethod
    def uniform(cls, tol: float, max_iterations: int = 200) -> Tolerance:
        return cls(abs_tol=tol, rel_tol=tol, max_iterations=max_iterations)


DEFAULT_TOL = Tolerance()


def call_finite(f: RealFunction, x: float) -> float:
    """Evaluate ``f(x)``, turning math errors and non-finite values into
    :class:`EvaluationDomainError`."""
    try:
        y = f(x)
    except EvaluationDomainError:
        raise
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise EvaluationDomainError(f"cannot evaluate function at x = {x!r}: {exc}", where=x) from exc
    y = float(y)
    if not math.isfinite(y):
        raise EvaluationDomainError(f"function is not finite at x = {x!r} (got {y})", where=x)
    return y


# ---------------------------------------------------------------------------
# Quadrature: Gauss-Kronrod 7/15 panels, globally adaptive bisection.
# ---------------------------------------------------------------------------

# Positive Kronrod abscissae, descending; odd indices (1, 3, 5) and the centre
# are shared with the 7-point Gauss rule.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# Gauss weights for _XGK[1], _XGK[3], _XGK[5] and the centre.
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

DEFAULT_MAX_DEPTH = 48
DEFAULT_MAX_PANELS = 4000


def gauss_kronrod_panel(f: RealFunction, a: float, b: float) -> tuple[float, float, float]:
    """One G7/K15 panel on ``[a, b]`` (``a < b``).

    Returns ``(kronrod, |kronrod - gauss|, roundoff_floor)``.
    """
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = call_finite(f, centre)
    res_k = fc * _WGK[7]
    res_g = fc * _WG[3]
    res_abs = abs(res_k)
    for j in range(7):
        dx = half * _XGK[j]
        f1 = call_finite(f, centre - dx)
        f2 = call_finite(f, centre + dx)
        res_k += _WGK[j] * (f1 + f2)
        res_abs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f1 + f2)
    kronrod = res_k * half
    err = abs((res_k - res_g) * half)
    floor = 50.0 * EPS * res_abs * half
    return kronrod, err, floor


def integrate(
    f: RealFunction,
    a: float,
    b: float,
    tol: Tolerance = DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_panels: int = DEFAULT_MAX_PANELS,
) -> float:
    """Oriented integral of ``f`` from ``a`` to ``b``.

    Panels with the largest error estimate are bisected until the summed
    estimate drops below ``abs_tol + rel_tol * |Q|`` (or below the accumulated
    roundoff floor). Raises :class:`ConvergenceError` carrying the best
    estimate when a panel would exceed ``max_depth`` or the panel budget runs
    out.
    """
    if a == b:
        return 0.0
    if a > b:
        return -integrate(f, b, a, tol, max_depth, max_panels)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ConfigurationError("integration limits must be finite")

    q, err, floor = gauss_kronrod_panel(f, a, b)
    # heap entries: (-error, lo, hi, value, error, floor, depth)
    heap = [(-err, a, b, q, err, floor, 0)]
    retired = []  # panels whose error is at roundoff level
    total, total_err, total_floor = q, err, floor
    while heap:
        target = max(tol.abs_tol + tol.rel_tol * abs(total), total_floor)
        if total_err <= target:
            break
        entry = heapq.heappop(heap)
        _, lo, hi, q, err, floor, depth = entry
        if err <= floor:
            retired.append(entry)
            total_err -= err
            continue
        if depth >= max_depth or len(heap) + len(retired) + 2 > max_panels:
            reason = f"depth cap {max_depth}" if depth >= max_depth else f"panel budget {max_panels}"
            raise ConvergenceError(
                f"quadrature on [{a!r}, {b!r}] exhausted its {reason} near [{lo!r}, {hi!r}] "
                f"(error estimate {total_err:.3g})",
                best=total,
            )
        mid = lo + 0.5 * (hi - lo)
        q1, e1, fl1 = gauss_kronrod_panel(f, lo, mid)
        q2, e2, fl2 = gauss_kronrod_panel(f, mid, hi)
        total += q1 + q2 - q
        total_err += e1 + e2 - err
        total_floor += fl1 + fl2 - floor
        heapq.heappush(heap, (-e1, lo, mid, q1, e1, fl1, depth + 1))
        heapq.heappush(heap, (-e2, mid, hi, q2, e2, fl2, depth + 1))
    return math.fsum(entry[3] for entry in heap + retired)


# ---------------------------------------------------------------------------
# Bracketed root refinement shared by inversion and the solvers.
# ---------------------------------------------------------------------------


def _same_sign(u: float, v: float) -> bool:
    return (u > 0) == (v > 0)


def refine_bracket(
    g: RealFunction,
    lo: float,
    hi: float,
    g_lo: float,
    g_hi: float,
    tol: Tolerance,
    monotone_check: bool = False,
) -> tuple[float, float, float, int]:
    """Shrink a sign-change bracket of ``g`` until its width is at most
    ``tol.x_tol``.

    False-position steps with the Illinois weight reduction, falling back to
    bisection whenever a step fails to halve the bracket. ``g_lo`` and
    ``g_hi`` must be nonzero with opposite signs.

    Returns ``(x, lo, hi, iterations)`` where ``x`` is the bracket point with
    the smaller ``|g|`` (or an exact zero) and ``[lo, hi]`` is the final
    bracket.
    """
    w_lo, w_hi = g_lo, g_hi  # weighted values used for the secant
    last_kept = 0  # -1 lo kept twice, +1 hi kept twice
    force_bisect = False
    for iteration in range(1, tol.max_iterations + 1):
        width = hi - lo
        xt = tol.x_tol(lo + 0.5 * width)
        if width <= xt:
            break
        x = None
        if not force_bisect and w_hi != w_lo:
            cand = hi - w_hi * (hi - lo) / (w_hi - w_lo)
            # keep the trial point at least half a tolerance inside
            margin = 0.5 * xt
            if lo + margin < cand < hi - margin:
                x = cand
            elif lo < cand < hi:
                x = lo + margin if cand - lo < hi - cand else hi - margin
        if x is None or not (lo < x < hi):
            x = lo + 0.5 * width
        gx = g(x)
        if monotone_check and not (min(g_lo, g_hi) <= gx <= max(g_lo, g_hi)):
            raise NotMonotoneError(f"monotonicity violated near x = {x!r}")
        if gx == 0.0:
            return x, x, x, iteration
        if _same_sign(gx, g_lo):
            lo, g_lo, w_lo = x, gx, gx
            if last_kept == 1:
                w_hi *= 0.5
            last_kept = 1
        else:
            hi, g_hi, w_hi = x, gx, gx
            if last_kept == -1:
                w_lo *= 0.5
            last_kept = -1
        force_bisect = hi - lo > 0.5 * width
    else:
        best = lo if abs(g_lo) <= abs(g_hi) else hi
        raise ConvergenceError(
            f"bracket [{lo!r}, {hi!r}] not reduced below tolerance in {tol.max_iterations} iterations",
            best=best,
        )
    x = lo if abs(g_lo) <= abs(g_hi) else hi
    return x, lo, hi, iteration - 1


def invert_monotone(
    f: RealFunction,
    domain: Interval,
    y: float,
    tol: Tolerance = DEFAULT_TOL,
    f_lo: float | None = None,
    f_hi: float | None = None,
) -> float:
    """Solve ``f(x) = y`` for ``x`` in ``domain``, ``f`` strictly monotone.

    ``f_lo``/``f_hi`` may carry precomputed endpoint values.
    """
    f_lo = call_finite(f, domain.lo) if f_lo is None else f_lo
    f_hi = call_finite(f, domain.hi) if f_hi is None else f_hi
    if f_lo == f_hi:
        raise NotMonotoneError(f"f takes the same value {f_lo!r} at both ends of {domain}")
    if y == f_lo:
        return domain.lo
    if y == f_hi:
        return domain.hi
    lo_img, hi_img = min(f_lo, f_hi), max(f_lo, f_hi)
    if not lo_img <= y <= hi_img:
        slack = 8 * EPS * max(abs(lo_img), abs(hi_img), 1.0)
        if lo_img - slack <= y < lo_img:
            return domain.lo if f_lo < f_hi else domain.hi
        if hi_img < y <= hi_img + slack:
            return domain.hi if f_lo < f_hi else domain.lo
        raise ImageRangeError(f"y = {y!r} is outside the image [{lo_img!r}, {hi_img!r}]")

    def g(x):
        return call_finite(f, x) - y

    x, _, _, _ = refine_bracket(g, domain.lo, domain.hi, f_lo - y, f_hi - y, tol, monotone_check=True)
    return x


def differentiate_numeric(f: RealFunction, x: float, scale: float = 1.0) -> float:
    """Central difference with step ``scale * cbrt(eps)``."""
    h = abs(scale) * EPS ** (1.0 / 3.0)
    if h == 0.0:
        raise ConfigurationError("differentiation scale must be nonzero")
    # make the step exactly representable relative to x
    xp = x + h
    xm = x - h
    return (call_finite(f, xp) - call_finite(f, xm)) / (xp - xm)


def check_monotone(f: RealFunction, domain: Interval, samples: int = 257) -> str:
    """Classify ``f`` on ``domain`` from ``samples`` equispaced values.

    Returns ``"increasing"``, ``"decreasing"`` or ``"not-monotone"``.
    """
    if samples < 3:
        raise ConfigurationError(f"check_monotone needs at least 3 samples, got {samples}")
    values = [call_finite(f, x) for x in domain.linspace(samples)]
    diffs = [b - a for a, b in zip(values, values[1:])]
    if all(d > 0 for d in diffs):
        return INCREASING
    if all(d < 0 for d in diffs):
        return DECREASING
    return NOT_MONOTONE
