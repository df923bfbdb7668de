"""Exception types shared across the package."""

from __future__ import annotations


class ParameterError(ValueError):
    """Invalid code parameters or malformed input."""


class DegenerateCaseError(ParameterError):
    """Raised when d = 2w, where the search degenerates to a closed form."""


class ResourceLimitError(RuntimeError):
    """A requested computation exceeds a configured memory or width guard."""


class CoefficientOverflowError(OverflowError):
    """Objective coefficients or values exceed the fixed-width integer range."""


class SearchExhaustedError(RuntimeError):
    """A bounded stochastic search ran out of queries before finding a target."""
