"""Exception hierarchy shared by all modules."""


class StrichartzError(Exception):
    """Base class for errors raised by this package."""


class DomainError(StrichartzError, ValueError):
    """An argument lies outside the domain of the operation."""


class RangeError(StrichartzError, IndexError):
    """An index (e.g. a Littlewood-Paley level) is outside the configured range."""


class NumericError(StrichartzError, FloatingPointError):
    """Non-finite input or output."""


class TruncationError(StrichartzError):
    """Data is not captured by a finite dyadic range.

    ``report`` carries the measured tail fraction and the band that was checked.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class PeriodizationError(StrichartzError):
    """A field does not decay at the boundary of the periodic box."""


class PreconditionError(StrichartzError):
    """Hypotheses required by an algorithm are not met."""
