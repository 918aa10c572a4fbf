"""Strictly monotone function models with derived capabilities.

A :class:`FunctionModel` wraps ``f`` on a closed interval together with
optional closed forms for its derivative, inverse, antiderivative and the
antiderivative of its inverse. Whatever is missing is synthesized
numerically. Antiderivatives are only meaningful up to an additive constant;
every consumer in this package uses differences of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .errors import DomainError, ImageRangeError
from .numeric import (
    DEFAULT_TOL,
    EPS,
    NOT_MONOTONE,
    Interval,
    RealFunction,
    Tolerance,
    call_finite,
    check_monotone,
    differentiate_numeric,
    integrate,
    invert_monotone,
)

VALIDATION_POINTS = 33
INVERSE_TOL = 1e-9
ANTIDERIVATIVE_TOL = 1e-8


@dataclass(frozen=True)
class ImageInterval:
    """Sorted images of the domain endpoints."""

    lo: float
    hi: float

    def __contains__(self, y) -> bool:
        return self.lo <= y <= self.hi

    def slack(self) -> float:
        return 8 * EPS * max(abs(self.lo), abs(self.hi), 1.0)

    def admits(self, y: float) -> bool:
        s = self.slack()
        return self.lo - s <= y <= self.hi + s

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)


@dataclass(frozen=True, eq=False)
class FunctionModel:
    """A strictly monotone function on ``domain``.

    ``func`` is required; the ``*_fn`` fields are optional closed forms.
    ``anchor`` is the base point for the synthesized antiderivative
    (defaults to the domain midpoint).
    """

    func: RealFunction
    domain: Interval
    derivative_fn: Optional[RealFunction] = None
    inverse_fn: Optional[RealFunction] = None
    antiderivative_fn: Optional[RealFunction] = None
    inverse_antiderivative_fn: Optional[RealFunction] = None
    anchor: Optional[float] = None
    name: str = "f"
    tol: Tolerance = field(default=DEFAULT_TOL)

    def __post_init__(self):
        anchor = self.domain.midpoint if self.anchor is None else float(self.anchor)
        if anchor not in self.domain:
            raise DomainError(f"quadrature anchor {anchor!r} is outside the domain {self.domain}")
        object.__setattr__(self, "anchor", anchor)

    # -- structure ---------------------------------------------------------

    @cached_property
    def endpoint_values(self) -> tuple[float, float]:
        return call_finite(self.func, self.domain.lo), call_finite(self.func, self.domain.hi)

    @cached_property
    def image(self) -> ImageInterval:
        a, b = self.endpoint_values
        return ImageInterval(min(a, b), max(a, b))

    @cached_property
    def monotonicity(self) -> str:
        """``"increasing"``, ``"decreasing"`` or ``"not-monotone"`` (sampled)."""
        return check_monotone(self.func, self.domain)

    @cached_property
    def validation(self) -> ValidationReport:
        return validate_model(self)

    def has_analytic(self, capability: str) -> bool:
        return getattr(self, f"{capability}_fn") is not None

    def numeric_twin(self) -> FunctionModel:
        """The same ``f`` with every derived capability synthesized."""
        return FunctionModel(func=self.func, domain=self.domain, anchor=self.anchor,
                             name=f"{self.name} (numeric)", tol=self.tol)

    # -- evaluation --------------------------------------------------------

    def _check_x(self, x: float) -> None:
        if x not in self.domain:
            raise DomainError(f"x = {x!r} is outside the domain {self.domain} of {self.name}")

    def _check_y(self, y: float) -> None:
        if not self.image.admits(y):
            raise ImageRangeError(f"y = {y!r} is outside the image [{self.image.lo!r}, {self.image.hi!r}] of {self.name}")

    def __call__(self, x: float) -> float:
        self._check_x(x)
        return call_finite(self.func, x)

    evaluate = __call__

    def derivative(self, x: float) -> float:
        self._check_x(x)
        if self.derivative_fn is not None:
            return call_finite(self.derivative_fn, x)
        # keep both probes inside the domain
        room = min(x - self.domain.lo, self.domain.hi - x)
        scale = max(1.0, abs(x))
        step = scale * EPS ** (1.0 / 3.0)
        if room < step:
            scale *= max(room, EPS * scale) / step
        return differentiate_numeric(self.func, x, scale)

    def inverse(self, y: float) -> float:
        self._check_y(y)
        if self.inverse_fn is not None:
            return call_finite(self.inverse_fn, y)
        lo, hi = self.endpoint_values
        return invert_monotone(self.func, self.domain, y, self.tol, f_lo=lo, f_hi=hi)

    def antiderivative(self, x: float) -> float:
        """An antiderivative of ``f``; synthesized as the integral from the anchor."""
        self._check_x(x)
        if self.antiderivative_fn is not None:
            return call_finite(self.antiderivative_fn, x)
        return integrate(self.func, self.anchor, x, self.tol)

    def inverse_antiderivative(self, y: float) -> float:
        """An antiderivative of the inverse: closed form if supplied, else
        :func:`laisant_antiderivative`."""
        self._check_y(y)
        if self.inverse_antiderivative_fn is not None:
            return call_finite(self.inverse_antiderivative_fn, y)
        return laisant_antiderivative(self, y)


def laisant_antiderivative(model: FunctionModel, y: float) -> float:
    """``y * f^-1(y) - F(f^-1(y))``, an antiderivative of ``f^-1``.

    Differentiating gives ``f^-1 + (y - f(f^-1(y))) * (f^-1)' = f^-1``. An
    error ``d`` in the computed inverse perturbs the value only by
    ``O(f' * d**2)``.
    """
    x = model.inverse(y)
    x = model.domain.clip(x)
    return y * x - model.antiderivative(x)


def quadrature_inverse_antiderivative(model: FunctionModel, y: float) -> float:
    """Antiderivative of ``f^-1`` by direct quadrature from ``f(anchor)``."""
    model._check_y(y)
    return integrate(model.inverse, model(model.anchor), y, model.tol)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    worst: float = 0.0
    skipped: bool = False


@dataclass(frozen=True)
class ValidationReport:
    model_name: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def summary(self) -> str:
        lines = [f"validation of {self.model_name}:"]
        for c in self.checks:
            mark = "skip" if c.skipped else ("pass" if c.passed else "FAIL")
            lines.append(f"  [{mark}] {c.name}: {c.detail}")
        return "\n".join(lines)


def _sample_pairs(domain: Interval, n: int = VALIDATION_POINTS) -> list[tuple[float, float]]:
    pts = domain.linspace(n)
    return list(zip(pts, pts[1:])) + [(domain.lo, domain.hi)]


def _check_monotonicity(model: FunctionModel) -> CheckResult:
    try:
        verdict = model.monotonicity
    except DomainError as exc:
        return CheckResult("monotonicity", False, f"evaluation failed: {exc}")
    if verdict == NOT_MONOTONE:
        return CheckResult("monotonicity", False, "f is not strictly monotone (not one-to-one) on the domain")
    return CheckResult("monotonicity", True, f"f is strictly {verdict}")


def _check_inverse(model: FunctionModel) -> CheckResult:
    if model.inverse_fn is None:
        return CheckResult("inverse round-trip", True, "numeric inverse (exact by construction)", skipped=True)
    worst = 0.0
    for x in model.domain.linspace(VALIDATION_POINTS):
        try:
            back = call_finite(model.inverse_fn, call_finite(model.func, x))
        except DomainError as exc:
            return CheckResult("inverse round-trip", False, f"inverse failed at x = {x!r}: {exc}", math.inf)
        worst = max(worst, abs(back - x) / (1.0 + abs(x)))
    ok = worst <= INVERSE_TOL
    return CheckResult("inverse round-trip", ok, f"max |f^-1(f(x)) - x| / (1 + |x|) = {worst:.3g}", worst)


def _check_antiderivative(model: FunctionModel) -> CheckResult:
    name = "antiderivative consistency"
    if model.antiderivative_fn is None:
        return CheckResult(name, True, "synthesized by quadrature", skipped=True)
    worst = 0.0
    try:
        for a, b in _sample_pairs(model.domain):
            diff = call_finite(model.antiderivative_fn, b) - call_finite(model.antiderivative_fn, a)
            quad = integrate(model.func, a, b, model.tol)
            worst = max(worst, abs(diff - quad) / (1.0 + abs(diff)))
    except DomainError as exc:
        return CheckResult(name, False, f"evaluation failed: {exc}", math.inf)
    ok = worst <= ANTIDERIVATIVE_TOL
    return CheckResult(name, ok, f"max scaled |dF - integral of f| = {worst:.3g}", worst)


def _check_inverse_antiderivative(model: FunctionModel) -> CheckResult:
    name = "inverse-antiderivative consistency"
    if model.inverse_antiderivative_fn is None:
        return CheckResult(name, True, "synthesized from the inverse and antiderivative", skipped=True)
    worst = 0.0
    try:
        for a, b in _sample_pairs(model.domain):
            ya, yb = call_finite(model.func, a), call_finite(model.func, b)
            diff = call_finite(model.inverse_antiderivative_fn, yb) - call_finite(model.inverse_antiderivative_fn, ya)
            quad = integrate(model.inverse, ya, yb, model.tol)
            worst = max(worst, abs(diff - quad) / (1.0 + abs(diff)))
    except DomainError as exc:
        return CheckResult(name, False, f"evaluation failed: {exc}", math.inf)
    ok = worst <= ANTIDERIVATIVE_TOL
    return CheckResult(name, ok, f"max scaled |dG - integral of f^-1| = {worst:.3g}", worst)


def validate_model(model: FunctionModel) -> ValidationReport:
    """Check that ``model`` is a usable one-to-one function.

    Failures are recorded in the report, never raised. The consistency checks
    only run for capabilities that were supplied in closed form.
    """
    mono = _check_monotonicity(model)
    if not mono.passed:
        # the remaining checks assume a well-defined inverse
        skipped = [
            CheckResult(n, True, "not checked: f is not one-to-one", skipped=True)
            for n in ("inverse round-trip", "antiderivative consistency", "inverse-antiderivative consistency")
        ]
        return ValidationReport(model.name, (mono, *skipped))
    checks = (
        mono,
        _check_inverse(model),
        _check_antiderivative(model),
        _check_inverse_antiderivative(model),
    )
    return ValidationReport(model.name, checks)

