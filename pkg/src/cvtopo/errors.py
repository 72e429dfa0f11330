"""Exception hierarchy.

Errors split into two families so the command line can map them onto exit
codes: bad input (exit 2) and a failed numerical self-check (exit 3).
"""


class CVTopoError(Exception):
    """Base class for all package errors."""


class ValidationError(CVTopoError, ValueError):
    """Input does not satisfy a documented precondition."""


class StructuralError(ValidationError):
    """Array has the wrong shape or dimension."""


class UnphysicalError(ValidationError):
    """Covariance or spectrum violates the uncertainty principle."""


class GeometryError(ValidationError):
    """Region or lattice geometry is invalid."""


class UnsupportedFormError(ValidationError):
    """Input is valid but outside the form an operation supports."""


class NumericalAssertionError(CVTopoError, ArithmeticError):
    """An internal numerical identity failed beyond tolerance."""


class DegenerateStateError(NumericalAssertionError):
    """A matrix that must be invertible is singular."""
