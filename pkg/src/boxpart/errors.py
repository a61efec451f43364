"""Exception types raised by boxpart."""


class BoxpartError(Exception):
    """Base class for all package errors."""


class DomainError(BoxpartError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateError(DomainError):
    """The request is well posed but has no tilt (n = 0 or n = l*m)."""


class CapExceededError(BoxpartError, MemoryError):
    """A computation would exceed its configured size cap."""

    def __init__(self, message, required):
        super().__init__(message)
        self.required = required


class ConvergenceError(BoxpartError, ArithmeticError):
    """An iterative solver stopped without meeting its tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SamplingBudgetError(BoxpartError, RuntimeError):
    """Rejection sampling ran out of tries before collecting enough hits."""

    def __init__(self, message, hits, tries):
        super().__init__(message)
        self.hits = hits
        self.tries = tries
