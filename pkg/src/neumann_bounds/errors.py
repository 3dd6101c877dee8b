"""Shared exception types.

Everything numerical-precondition-ish derives from ValueError so callers can
catch broadly; genuine runtime arithmetic failures derive from ArithmeticError.
"""


class DimensionError(ValueError):
    """Array shape is incompatible with the operation (non-square, mismatch)."""


class SymmetryError(ValueError):
    """Matrix tagged or required symmetric/Hermitian fails the numerical check."""


class SingularityError(ValueError):
    """Matrix is singular (or numerically so) where invertibility is required."""


class DomainError(ValueError):
    """Scalar argument outside the documented domain."""


class PreconditionError(ValueError):
    """Structured input violates a documented precondition."""


class DivergenceError(ArithmeticError):
    """Iteration cannot converge (spectral radius >= 1)."""


class NumericalError(ArithmeticError):
    """Computation produced non-finite values or failed a runtime audit."""
