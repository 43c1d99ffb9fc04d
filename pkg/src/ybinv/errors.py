"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "YBInvError",
    "ParseError",
    "ParameterError",
    "SizeGuardError",
    "SingularMatrixError",
]


class YBInvError(Exception):
    """Base class for every error raised by this package."""


class ParseError(YBInvError, ValueError):
    """A literal, braid word or parameter file could not be parsed."""


class ParameterError(YBInvError, ValueError):
    """Trace parameters fail the compatibility conditions."""


class SizeGuardError(YBInvError, ValueError):
    """The requested (n, d) lies outside the supported envelope."""


class SingularMatrixError(YBInvError, ArithmeticError):
    """The C-basis change-of-basis matrix is not unitriangular."""
