"""Rectangle decomposition and the root residual built from it.

For a strictly monotone, continuously differentiable ``f`` and any ``a, b``
in its domain, the oriented areas satisfy

    b*f(b) - a*f(a) = integral_a^b f(x) dx + integral_{f(a)}^{f(b)} f^-1(y) dy

i.e. the area under the graph plus the area to the left of it fill the
difference of two rectangles anchored at the origin. Writing the integrals
with antiderivatives ``F`` (of f) and ``G`` (of f^-1) and taking ``a = alpha``,
``b = alpha + h`` gives the residual

    R(alpha; h) = F(alpha+h) - F(alpha) + G(f(alpha+h)) - G(f(alpha))
                  - (alpha+h) * f(alpha+h)
                = -alpha * f(alpha)

for every offset ``h``. Zeros of ``R`` are therefore the roots of ``f`` plus
the extra zero ``alpha = 0``. Because ``R`` does not depend on ``h``, the
limit ``h -> 0`` is never taken numerically; a moderate offset avoids the
cancellation a tiny one would cause in ``F(alpha+h) - F(alpha)``.

Integrals are oriented, so decreasing functions need no special casing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateOffsetError, DomainError
from .model import FunctionModel
from .numeric import Tolerance, integrate

DEFAULT_OFFSET_FRACTION = 0.25


@dataclass(frozen=True)
class ResidualSample:
    alpha: float
    h: float
    value: float


@dataclass(frozen=True)
class OffsetSweep:
    samples: tuple[ResidualSample, ...]

    @property
    def values(self) -> list[float]:
        return [s.value for s in self.samples]

    @property
    def spread(self) -> float:
        v = self.values
        return max(v) - min(v)


def rectangle_residual(model: FunctionModel, a: float, b: float, tol: Tolerance | None = None) -> float:
    """``[b f(b) - a f(a)] - int_a^b f - int_{f(a)}^{f(b)} f^-1``, by direct
    quadrature of both areas. Zero up to quadrature error."""
    tol = model.tol if tol is None else tol
    fa, fb = model(a), model(b)
    under = integrate(model.func, a, b, tol)
    left = integrate(model.inverse, fa, fb, tol)
    return (b * fb - a * fa) - under - left


def rectangle_scale(model: FunctionModel, a: float, b: float) -> float:
    return 1.0 + abs(b * model(b)) + abs(a * model(a))


def root_residual(model: FunctionModel, alpha: float, h: float) -> float:
    """``R(alpha; h)`` from the antiderivative form; equals ``-alpha f(alpha)``."""
    if h == 0:
        raise DegenerateOffsetError("offset h must be nonzero")
    x1 = alpha + h
    if alpha not in model.domain or x1 not in model.domain:
        raise DomainError(f"alpha = {alpha!r} and alpha + h = {x1!r} must both lie in {model.domain}")
    y0, y1 = model(alpha), model(x1)
    area_under = model.antiderivative(x1) - model.antiderivative(alpha)
    area_left = model.inverse_antiderivative(y1) - model.inverse_antiderivative(y0)
    return area_under + area_left - x1 * y1


def residual_scale(model: FunctionModel, alpha: float, h: float) -> float:
    """Magnitude of the terms that cancel inside ``R(alpha; h)``."""
    x1 = alpha + h
    return 1.0 + abs(x1 * model(x1)) + abs(alpha * model(alpha))


def default_offset(model: FunctionModel, alpha: float, fraction: float = DEFAULT_OFFSET_FRACTION) -> float:
    """``fraction`` of the domain width, clipped to the headroom on the right
    of ``alpha``, or taken to the left when there is more room there."""
    if alpha not in model.domain:
        raise DomainError(f"alpha = {alpha!r} is outside {model.domain}")
    target = fraction * model.domain.width
    right = model.domain.hi - alpha
    left = alpha - model.domain.lo
    if right >= target:
        return target
    if right >= left:
        return right
    return -min(target, left)


def offset_sweep(model: FunctionModel, alpha: float, offsets: Sequence[float]) -> OffsetSweep:
    """``R(alpha; h)`` at each offset. The spread of the values measures how far
    the numerical residual is from being exactly ``h``-independent."""
    if not offsets:
        raise DegenerateOffsetError("offset sweep needs at least one offset")
    samples = tuple(ResidualSample(alpha, h, root_residual(model, alpha, h)) for h in offsets)
    return OffsetSweep(samples)
