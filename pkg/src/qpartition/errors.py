"""Exception hierarchy shared across the package."""


class PartitionError(Exception):
    """Base class for all errors raised by qpartition."""


class DomainError(PartitionError, ValueError):
    """An argument lies outside the domain of the requested function."""


class ConfigError(PartitionError, ValueError):
    """A configuration document or grid/quadrature spec is malformed."""


class NumericalError(PartitionError, ArithmeticError):
    """A numerical procedure failed (singular matrix, solver breakdown, ...)."""


class SingularityError(NumericalError):
    """A closed-form expression hit a vanishing denominator."""


class DivergenceError(NumericalError):
    """The requested quantity is infinite for the given model."""


class AccuracyError(NumericalError):
    """A quadrature did not reach the requested tolerance.

    The best estimate and its error are kept on the exception so callers
    can still report them.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
