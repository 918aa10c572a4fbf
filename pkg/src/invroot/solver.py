"""Root finding through the rectangle residual, with a plain bisection
baseline on ``f`` for cross-checking.

``root_residual(model, alpha, h)`` equals ``-alpha * f(alpha)``, so it
vanishes at the roots of ``f`` and, whenever 0 is in the domain, at the
spurious point ``alpha = 0``. The identity solver brackets sign changes of
the residual and excludes a small neighbourhood of 0 when ``f(0) != 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

from .errors import (
    AdmissibilityError,
    BracketError,
    ConfigurationError,
    ConvergenceError,
    DegenerateOffsetError,
    DomainError,
    InvRootError,
    NoRootInBracketError,
)
from .identity import root_residual
from .model import FunctionModel
from .numeric import DEFAULT_TOL, Interval, Tolerance, refine_bracket

SCAN_PANELS = 64
AUTO_FRACTION = 0.25
AGREEMENT_TOL = 1e-9

METHOD_IDENTITY = "identity"
METHOD_ORACLE = "oracle"

HPolicy = Union[float, str]


@dataclass(frozen=True)
class SolverConfig:
    bracket: Interval
    h: HPolicy = "auto"
    tol: Tolerance = field(default=DEFAULT_TOL)
    filter_spurious: bool = True

    def __post_init__(self):
        if isinstance(self.h, str):
            if self.h != "auto":
                raise ConfigurationError(f"h policy must be 'auto' or a real number, got {self.h!r}")
        else:
            h = float(self.h)
            if h == 0.0:
                raise DegenerateOffsetError("fixed offset h must be nonzero")
            if not math.isfinite(h):
                raise ConfigurationError(f"fixed offset h must be finite, got {h}")
            object.__setattr__(self, "h", h)


@dataclass(frozen=True)
class RootResult:
    root: float
    residual_at_root: float
    f_at_root: float
    iterations: int
    h_used: float | None
    spurious_filtered: bool
    method: str
    bracket: Interval
    status: str = "success"

    @property
    def ok(self) -> bool:
        return self.status == "success"


@dataclass(frozen=True)
class ComparisonReport:
    identity: RootResult
    oracle: RootResult

    @property
    def difference(self) -> float:
        return abs(self.identity.root - self.oracle.root)

    @property
    def scaled_difference(self) -> float:
        return self.difference / (1.0 + abs(self.oracle.root))

    @property
    def agrees(self) -> bool:
        return self.scaled_difference <= AGREEMENT_TOL


class ComparisonError(InvRootError):
    """One or both methods failed; ``errors`` maps method name to exception."""

    def __init__(self, errors: dict[str, InvRootError], results: dict[str, RootResult]):
        self.errors = errors
        self.results = results
        parts = [f"{m}: {type(e).__name__}: {e}" for m, e in errors.items()]
        super().__init__("; ".join(parts))
        first = errors.get(METHOD_IDENTITY) or errors.get(METHOD_ORACLE)
        self.exit_code = first.exit_code


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _check_bracket(model: FunctionModel, bracket: Interval) -> None:
    if not model.domain.contains_interval(bracket):
        raise DomainError(f"bracket {bracket} is not inside the domain {model.domain}")


def offset_policy(model: FunctionModel, config: SolverConfig) -> Callable[[float], float]:
    """Map a probe point ``alpha`` to the offset used for ``R(alpha; h)``.

    Fixed offsets must keep ``bracket + h`` inside the domain. The automatic
    policy uses a quarter of the bracket width, shifted to the left side when
    the right side has no room, and falls back to choosing per probe when the
    bracket fills the domain.
    """
    bracket, domain = config.bracket, model.domain
    if config.h != "auto":
        h = config.h
        if bracket.lo + h < domain.lo or bracket.hi + h > domain.hi:
            raise DomainError(f"offset h = {h!r} moves bracket {bracket} outside the domain {domain}")
        return lambda alpha: h
    target = AUTO_FRACTION * bracket.width
    right = domain.hi - bracket.hi
    left = bracket.lo - domain.lo
    if right >= target:
        return lambda alpha: target
    if left >= target:
        return lambda alpha: -target
    # bracket (nearly) fills the domain; any probe has >= 2*target room on one side
    if max(right, left) >= 1e-3 * target:
        h = right if right >= left else -left
        return lambda alpha: h

    def per_probe(alpha):
        return target if alpha + target <= domain.hi else -target

    return per_probe


def _effective_offset(model: FunctionModel, offset: Callable[[float], float], alpha: float) -> float:
    """The requested offset, pulled back by rounding when ``alpha + h`` lands
    a hair outside the domain."""
    h = offset(alpha)
    if alpha + h in model.domain:
        return h
    return model.domain.clip(alpha + h) - alpha


def _residual_function(model: FunctionModel, offset: Callable[[float], float]):
    def R(alpha):
        return root_residual(model, alpha, _effective_offset(model, offset, alpha))

    return R


def _f_check(model: FunctionModel, x: float, lo: float, hi: float, tol: Tolerance) -> tuple[float, bool]:
    """``f(x)`` and whether ``x`` is a genuine root of ``f``.

    ``[lo, hi]`` is the final bracket around ``x``; ``x`` is accepted when
    ``|f(x)|`` is within ``abs_tol`` plus the variation of ``f`` across it.
    """
    fx = model(x)
    if fx == 0.0:
        return fx, True
    if hi - lo <= 0.0:
        xt = tol.x_tol(x)
        lo, hi = x - xt, x + xt
    lo, hi = model.domain.clip(lo), model.domain.clip(hi)
    spread = abs(model(hi) - model(lo))
    return fx, abs(fx) <= tol.abs_tol + spread


def _scan(R, lo: float, hi: float, panels: int = SCAN_PANELS):
    """Yield ``(a, b, R(a), R(b))`` for successive grid panels of ``[lo, hi]``
    where ``R`` changes sign or hits zero, scanning upward from ``lo``."""
    step = (hi - lo) / panels
    a = lo
    ra = R(a)
    if ra == 0.0:
        yield a, a, ra, ra
    for i in range(1, panels + 1):
        b = hi if i == panels else lo + i * step
        rb = R(b)
        if rb == 0.0:
            yield b, b, rb, rb
        elif ra != 0.0 and (ra > 0) != (rb > 0):
            yield a, b, ra, rb
        a, ra = b, rb


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def solve_identity(model: FunctionModel, config: SolverConfig) -> RootResult:
    """Find a root of ``f`` as a zero of the rectangle residual over
    ``config.bracket``.

    The first genuine root found scanning upward from ``bracket.lo`` is
    returned. With ``filter_spurious`` (the default), ``alpha = 0`` is excluded
    whenever it lies in the bracket and is not itself a root of ``f``.
    """
    report = model.validation
    if not report.passed:
        raise AdmissibilityError(
            f"{model.name} is not admissible (needs a smooth one-to-one function):\n{report.summary()}",
            report,
        )
    bracket, tol = config.bracket, config.tol
    _check_bracket(model, bracket)
    offset = offset_policy(model, config)
    R = _residual_function(model, offset)

    segments = [(bracket.lo, bracket.hi)]
    spurious_filtered = False
    if bracket.lo <= 0.0 <= bracket.hi:
        f0, zero_is_root = _f_check(model, 0.0, 0.0, 0.0, tol)
        if zero_is_root:
            return RootResult(0.0, R(0.0), f0, 0, offset(0.0), False, METHOD_IDENTITY, bracket)
        if config.filter_spurious:
            spurious_filtered = True
            delta = min(math.sqrt(tol.abs_tol), 1e-3) * max(1.0, bracket.width)
            segments = [(lo, hi) for lo, hi in ((bracket.lo, -delta), (delta, bracket.hi)) if lo < hi]

    iterations = 0
    fallback = None
    for seg_lo, seg_hi in segments:
        for a, b, ra, rb in _scan(R, seg_lo, seg_hi):
            if a == b:
                x, lo, hi, n = a, a, a, 0
            else:
                x, lo, hi, n = refine_bracket(R, a, b, ra, rb, tol)
            iterations += n
            fx, genuine = _f_check(model, x, lo, hi, tol)
            result = RootResult(
                root=x,
                residual_at_root=R(x),
                f_at_root=fx,
                iterations=iterations,
                h_used=_effective_offset(model, offset, x),
                spurious_filtered=spurious_filtered,
                method=METHOD_IDENTITY,
                bracket=bracket,
                status="success" if genuine else "spurious",
            )
            if genuine:
                return result
            if not config.filter_spurious:
                fallback = fallback or result
            else:
                spurious_filtered = True
    if fallback is not None:
        return fallback
    if spurious_filtered:
        raise NoRootInBracketError(
            f"the only zero of alpha*f(alpha) in {bracket} is the spurious alpha = 0; "
            f"f has no root there"
        )
    raise BracketError(f"the residual does not change sign over {bracket}; f has no root there")


def solve_oracle_bisect(model: FunctionModel, bracket: Interval, tol: Tolerance = DEFAULT_TOL) -> RootResult:
    """Plain bisection on ``f``."""
    _check_bracket(model, bracket)
    lo, hi = bracket.lo, bracket.hi
    f_lo, f_hi = model(lo), model(hi)

    def done(x, fx, n):
        return RootResult(x, fx, fx, n, None, False, METHOD_ORACLE, bracket)

    if f_lo == 0.0:
        return done(lo, f_lo, 0)
    if f_hi == 0.0:
        return done(hi, f_hi, 0)
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(f"f does not change sign over {bracket} (f(lo) = {f_lo!r}, f(hi) = {f_hi!r})")
    for n in range(1, tol.max_iterations + 1):
        mid = lo + 0.5 * (hi - lo)
        if hi - lo <= tol.x_tol(mid) or not lo < mid < hi:
            break
        f_mid = model(mid)
        if f_mid == 0.0:
            return done(mid, f_mid, n)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    else:
        raise ConvergenceError(f"bisection did not converge in {tol.max_iterations} iterations", best=mid)
    x, fx = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
    return done(x, fx, n - 1)


def compare_methods(model: FunctionModel, config: SolverConfig) -> ComparisonReport:
    """Run both solvers on the same bracket.

    Raises :class:`ComparisonError` listing each method's failure if either
    one fails.
    """
    results, errors = {}, {}
    runs = (
        (METHOD_IDENTITY, lambda: solve_identity(model, config)),
        (METHOD_ORACLE, lambda: solve_oracle_bisect(model, config.bracket, config.tol)),
    )
    for method, run in runs:
        try:
            results[method] = run()
        except InvRootError as exc:
            errors[method] = exc
    if errors:
        raise ComparisonError(errors, results)
    return ComparisonReport(results[METHOD_IDENTITY], results[METHOD_ORACLE])
