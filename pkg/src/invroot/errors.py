"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the command layer can
translate failures without a lookup table.
"""

from __future__ import annotations


class InvRootError(Exception):
    exit_code = 5


class ConfigurationError(InvRootError, ValueError):
    """Invalid interval, tolerance, solver configuration or job description."""

    exit_code = 4


class DomainError(InvRootError, ValueError):
    """An argument lies outside the domain of the model."""

    exit_code = 4


class EvaluationDomainError(DomainError):
    """The function could not be evaluated (non-finite value, ln of a
    non-positive number, division by zero, ...)."""

    def __init__(self, message: str, where: float | None = None, subexpr: str | None = None):
        super().__init__(message)
        self.where = where
        self.subexpr = subexpr


class ImageRangeError(DomainError):
    """A value lies outside the image interval of a monotone function."""


class DegenerateOffsetError(DomainError):
    """The residual offset h was zero."""


class AdmissibilityError(InvRootError, ValueError):
    """The function is not one-to-one (or otherwise unusable) on its domain."""

    exit_code = 4

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NotMonotoneError(AdmissibilityError):
    pass


class SpecificationError(AdmissibilityError):
    """Catalog family parameters or domain are inadmissible."""


class BracketError(InvRootError):
    """The target function does not change sign over the bracket."""

    exit_code = 2


class NoRootInBracketError(BracketError):
    """The only zero found in the bracket was the spurious alpha = 0."""


class ConvergenceError(InvRootError):
    """An iteration or subdivision budget ran out.

    ``best`` holds the best estimate available when the budget ran out.
    """

    exit_code = 5

    def __init__(self, message: str, best: float | None = None):
        super().__init__(message)
        self.best = best


class ParseError(InvRootError, ValueError):
    exit_code = 3

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class LexicalError(ParseError):
    pass


class ExprSyntaxError(ParseError):
    pass
