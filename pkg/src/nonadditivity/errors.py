"""Exception and warning types raised across the package."""


class NonadditivityError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(NonadditivityError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class NonHermitianInput(NonadditivityError, ValueError):
    pass


class NotADensityOperator(NonadditivityError, ValueError):
    pass


class DimensionMismatch(NonadditivityError, ValueError):
    pass


class DimensionOverflow(NonadditivityError, ValueError):
    """A dense tensor product would exceed the configured entry limit."""


class NotCompletelyPositive(NonadditivityError, ValueError):
    pass


class InvalidParams(NonadditivityError, ValueError):
    pass


class ConvergenceFailure(NonadditivityError, RuntimeError):
    pass


class SamplingExhausted(NonadditivityError, RuntimeError):
    pass


class NonMonotoneWarning(UserWarning):
    """Bisection bracketing failed; a grid scan was used instead."""
