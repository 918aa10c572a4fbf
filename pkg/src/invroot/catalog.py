"""Analytic function families.

Each family supplies closed forms for f, f', the inverse, an antiderivative
and an antiderivative of the inverse, so every synthesized path in the
package can be checked against exact values.

=========== ============ ======================== =============== ==========
id          parameters   f(x)                     root            direction
=========== ============ ======================== =============== ==========
log         (none)       ln x                     1               increasing
affine      m, b         m x + b                  -b / m          sign of m
exp-shift   c > 0        e^x - c                  ln c            increasing
cube-shift  c            x^3 - c                  cbrt(c)         increasing
reciprocal  c            1/x - c   (x > 0)        1 / c (c > 0)   decreasing
=========== ============ ======================== =============== ==========
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import SpecificationError
from .model import FunctionModel
from .numeric import Interval


def _cbrt(u: float) -> float:
    return math.copysign(abs(u) ** (1.0 / 3.0), u)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[float, ...] = ()
    domain: Interval = field(default_factory=lambda: Interval(-1.0, 1.0))

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @property
    def label(self) -> str:
        if not self.params:
            return self.family
        return f"{self.family}({', '.join(f'{p:g}' for p in self.params)})"


@dataclass(frozen=True)
class FamilyInfo:
    family: str
    parameters: tuple[str, ...]
    formula: str
    root: str
    monotonicity: str
    description: str
    default: FamilySpec


def _positive_domain(spec: FamilySpec):
    if spec.domain.lo <= 0:
        raise SpecificationError(f"{spec.family} needs a domain inside (0, inf), got {spec.domain}")


def _arity(spec: FamilySpec, n: int):
    if len(spec.params) != n:
        raise SpecificationError(f"{spec.family} takes {n} parameter(s), got {len(spec.params)}")


def _log(spec: FamilySpec) -> FunctionModel:
    _arity(spec, 0)
    _positive_domain(spec)
    return FunctionModel(
        func=math.log,
        domain=spec.domain,
        derivative_fn=lambda x: 1.0 / x,
        inverse_fn=math.exp,
        antiderivative_fn=lambda x: x * math.log(x) - x,
        inverse_antiderivative_fn=math.exp,
        name=spec.label,
    )


def _affine(spec: FamilySpec) -> FunctionModel:
    _arity(spec, 2)
    m, b = spec.params
    if m == 0:
        raise SpecificationError("affine slope m must be nonzero")
    return FunctionModel(
        func=lambda x: m * x + b,
        domain=spec.domain,
        derivative_fn=lambda x: m,
        inverse_fn=lambda y: (y - b) / m,
        antiderivative_fn=lambda x: 0.5 * m * x * x + b * x,
        inverse_antiderivative_fn=lambda y: (y - b) ** 2 / (2.0 * m),
        name=spec.label,
    )


def _exp_shift(spec: FamilySpec) -> FunctionModel:
    _arity(spec, 1)
    (c,) = spec.params
    if not c > 0:
        raise SpecificationError(f"exp-shift offset c must be positive, got {c}")
    if spec.domain.hi > 700:
        raise SpecificationError("exp-shift domain would overflow double precision")

    def G(y):
        u = y + c
        return u * math.log(u) - u

    return FunctionModel(
        func=lambda x: math.exp(x) - c,
        domain=spec.domain,
        derivative_fn=math.exp,
        inverse_fn=lambda y: math.log(y + c),
        antiderivative_fn=lambda x: math.exp(x) - c * x,
        inverse_antiderivative_fn=G,
        name=spec.label,
    )


def _cube_shift(spec: FamilySpec) -> FunctionModel:
    _arity(spec, 1)
    (c,) = spec.params
    return FunctionModel(
        func=lambda x: x**3 - c,
        domain=spec.domain,
        derivative_fn=lambda x: 3.0 * x * x,
        inverse_fn=lambda y: _cbrt(y + c),
        antiderivative_fn=lambda x: 0.25 * x**4 - c * x,
        # d/du of (3/4)|u|^(4/3) is cbrt(u) on both sides of 0
        inverse_antiderivative_fn=lambda y: 0.75 * abs(y + c) ** (4.0 / 3.0),
        name=spec.label,
    )


def _reciprocal(spec: FamilySpec) -> FunctionModel:
    _arity(spec, 1)
    (c,) = spec.params
    _positive_domain(spec)
    return FunctionModel(
        func=lambda x: 1.0 / x - c,
        domain=spec.domain,
        derivative_fn=lambda x: -1.0 / (x * x),
        inverse_fn=lambda y: 1.0 / (y + c),
        antiderivative_fn=lambda x: math.log(x) - c * x,
        inverse_antiderivative_fn=lambda y: math.log(y + c),
        name=spec.label,
    )


_BUILDERS = {
    "log": _log,
    "affine": _affine,
    "exp-shift": _exp_shift,
    "cube-shift": _cube_shift,
    "reciprocal": _reciprocal,
}

_FAMILIES = (
    FamilyInfo(
        "log", (), "f(x) = ln(x)", "alpha = 1", "increasing",
        "Natural logarithm on a positive domain; inverse e^y, antiderivative x ln x - x, "
        "inverse antiderivative e^y.",
        FamilySpec("log", (), Interval(0.1, 10.0)),
    ),
    FamilyInfo(
        "affine", ("m (slope, nonzero)", "b (intercept)"), "f(x) = m*x + b", "alpha = -b/m",
        "increasing if m > 0, decreasing if m < 0",
        "Straight line; every capability is a polynomial.",
        FamilySpec("affine", (2.0, -4.0), Interval(-5.0, 5.0)),
    ),
    FamilyInfo(
        "exp-shift", ("c (offset, > 0)",), "f(x) = exp(x) - c", "alpha = ln(c)", "increasing",
        "Shifted exponential; inverse ln(y + c), antiderivative e^x - c x.",
        FamilySpec("exp-shift", (2.0,), Interval(-1.0, 3.0)),
    ),
    FamilyInfo(
        "cube-shift", ("c (offset)",), "f(x) = x^3 - c", "alpha = cbrt(c)", "increasing",
        "Shifted cubic; the inverse cbrt(y + c) has a vertical tangent at y = -c, "
        "which stresses the quadrature of the inverse.",
        FamilySpec("cube-shift", (2.0,), Interval(-2.0, 3.0)),
    ),
    FamilyInfo(
        "reciprocal", ("c (offset)",), "f(x) = 1/x - c", "alpha = 1/c (when c > 0)", "decreasing",
        "Shifted reciprocal on a positive domain; decreasing, inverse 1/(y + c), "
        "inverse antiderivative ln(y + c).",
        FamilySpec("reciprocal", (1.0,), Interval(0.3, 4.0)),
    ),
)


def list_families() -> list[FamilyInfo]:
    return list(_FAMILIES)


def family_info(family: str) -> FamilyInfo:
    for info in _FAMILIES:
        if info.family == family:
            return info
    raise SpecificationError(f"unknown family {family!r}; choose from {', '.join(_BUILDERS)}")


def instantiate(spec: FamilySpec) -> FunctionModel:
    """Build the analytic :class:`FunctionModel` for ``spec``."""
    try:
        builder = _BUILDERS[spec.family]
    except KeyError:
        raise SpecificationError(
            f"unknown family {spec.family!r}; choose from {', '.join(_BUILDERS)}"
        ) from None
    return builder(spec)


def make(family: str, params: Sequence[float] | None = None, domain: Interval | None = None) -> FunctionModel:
    """Instantiate ``family`` filling unspecified parameters/domain from its defaults."""
    default = family_info(family).default
    spec = FamilySpec(
        family,
        default.params if params is None else tuple(params),
        default.domain if domain is None else domain,
    )
    return instantiate(spec)


def known_root(spec: FamilySpec) -> float | None:
    """Closed-form root of the family, or ``None`` if it has none (or it lies
    outside the domain)."""
    p = spec.params
    if spec.family == "log":
        root = 1.0
    elif spec.family == "affine":
        root = -p[1] / p[0]
    elif spec.family == "exp-shift":
        root = math.log(p[0])
    elif spec.family == "cube-shift":
        root = _cbrt(p[0])
    elif spec.family == "reciprocal":
        root = 1.0 / p[0] if p[0] > 0 else None
    else:
        raise SpecificationError(f"unknown family {spec.family!r}")
    if root is None or root not in spec.domain:
        return None
    return root
