"""Exception hierarchy."""

from __future__ import annotations


class PhasewaveError(Exception):
    """Base class for all errors raised by this package."""


class InvalidStressError(PhasewaveError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoSpinodalError(PhasewaveError, ValueError):
    pass


class OutOfBandError(PhasewaveError, ValueError):
    pass


class NonFiniteError(PhasewaveError, ArithmeticError):
    """The state left the floating-point range; usually a sign of instability."""


class NotCenterError(PhasewaveError, ValueError):
    pass


class NotHyperbolicError(PhasewaveError, ValueError):
    pass


class NotSaddleError(PhasewaveError, ValueError):
    pass


class SingularSystemError(PhasewaveError, ArithmeticError):
    pass


class NoConvergenceError(PhasewaveError, ArithmeticError):
    pass


class SingularLeadingError(SingularSystemError):
    """The leading coefficient of a discrete amplification quadratic vanishes."""
