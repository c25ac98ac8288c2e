"""
Exception hierarchy for the toolkit.

Input errors are the caller's fault (bad dimensions, invalid spaces, degenerate
operators); the CLI maps them to exit code 2. Inconsistencies signal that two
independent computations disagreed; the CLI maps them to exit code 1.
"""

from typing import Any, List


class WgeoError(Exception):
    """Base class for all toolkit errors."""


class WgeoInputError(WgeoError, ValueError):
    """Invalid input supplied by the caller."""


class InvalidDimensionError(WgeoInputError):
    pass


class InvalidParameterError(WgeoInputError):
    pass


class DimensionMismatchError(WgeoInputError):
    pass


class ZeroVectorError(WgeoInputError):
    pass


class DependentBasisError(WgeoInputError):
    pass


class DegenerateOperatorError(WgeoInputError):
    """w(T) = 0 where a positive numerical radius is required."""


class NormFailureError(WgeoInputError):
    """The numerical radius is not a norm on the operators of this space."""


class UnsupportedError(WgeoInputError):
    pass


class SpaceValidationError(WgeoInputError):
    """A PolyhedralSpace failed validation; carries every violation found."""

    def __init__(self, violations: List[Any]):
        self.violations = list(violations)
        first = self.violations[0]
        super().__init__(
            f"{first.invariant} violation at {first.kind} {first.index}: {first.message}"
            + (f" (+{len(self.violations) - 1} more)" if len(self.violations) > 1 else "")
        )


class InconsistencyError(WgeoError, RuntimeError):
    """Two independent computations that must agree did not."""


class InvalidDocumentError(WgeoInputError):
    """An input JSON document is missing, malformed or fails its schema."""
