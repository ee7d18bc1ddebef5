"""Exception types shared across the package."""


class DomainMismatchError(ValueError):
    """Objects defined on different measure spaces were combined."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class AliasingError(PreconditionError):
    """A torus grid is too coarse for the requested frequency box."""


class NumericalError(RuntimeError):
    """A numerical routine failed; ``diagnostics`` holds the details."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConvergenceError(NumericalError):
    """Bisection did not reach the requested bracket width."""

    def __init__(self, message, lo, hi, iterations):
        super().__init__(message, lo=lo, hi=hi, iterations=iterations)
        self.bracket = (lo, hi)
        self.iterations = iterations
