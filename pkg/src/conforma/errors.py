"""Exception hierarchy shared by every numeric operation."""

from __future__ import annotations


class ConformaError(Exception):
    """Base class for all errors raised by :mod:`conforma`."""


class DomainError(ConformaError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PreconditionError(ConformaError, ValueError):
    """A caller-declared property (smoothness, hooks) is insufficient."""


class SingularityError(DomainError):
    """The operation hits a point where its formula is singular."""


class NumericFailure(ConformaError, ArithmeticError):
    """Base for failures of an otherwise well-posed numeric computation."""


class ConvergenceError(NumericFailure):
    """A limit or extrapolation sequence did not settle."""


class AccuracyError(NumericFailure):
    """Quadrature could not meet its tolerance within the subdivision budget.

    The best available value and its error estimate are kept on the
    exception so callers may decide to accept them.
    """

    def __init__(self, message: str, value: float, estimate: float):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class DivergenceError(NumericFailure):
    """An improper integral does not converge for the requested parameters."""
