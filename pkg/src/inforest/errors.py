"""Exception hierarchy shared by all modules."""


class InForestError(Exception):
    """Base class for every error raised by this package."""


class InputError(InForestError, ValueError):
    """Malformed or invalid user input (files, flags, digraph data)."""


class DimensionError(InputError):
    """Operand shapes are incompatible."""


class SizeLimitError(InputError):
    """Input exceeds a documented size guard (e.g. exhaustive enumeration)."""


class MultichainError(InputError):
    """A stationary distribution was requested for a chain with several sink classes."""


class DegenerateGraphError(InputError):
    """A formula needs at least one arc-bearing forest (n - d >= 1)."""


class NumericalError(InForestError, ArithmeticError):
    """Base class for failures of floating-point computations."""


class SingularMatrixError(NumericalError):
    """A pivot fell below tolerance during factorization."""


class MatrixOverflowError(NumericalError):
    """An operation produced a non-finite entry."""


class NumericalInstabilityError(NumericalError):
    """A computed quantity violates a property guaranteed by theory."""


class RootFindingError(NumericalError):
    """Polynomial roots could not be located to the required residual."""


class NoEigenvectorError(NumericalError):
    """Every column of the forest matrix at the eigenvalue vanished."""
