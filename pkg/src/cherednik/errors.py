"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so keep the classes coarse.
"""


class CherednikError(Exception):
    """Base class for all library errors."""


class DomainError(CherednikError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class ConvergenceError(CherednikError, ArithmeticError):
    """A series or iteration did not reach its tolerance.

    Attributes
    ----------
    partial : complex or ndarray
        The last partial estimate, returned for diagnostics.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EvaluationError(CherednikError, ArithmeticError):
    """A NaN or Inf appeared where a finite value is required."""


class BudgetError(CherednikError, RuntimeError):
    """A requested grid exceeds the configured node budget."""


class BoundViolation(CherednikError, ValueError):
    """A value that must be positive (or nonnegative) was not."""
