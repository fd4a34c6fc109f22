"""Exception types raised across the package."""


class InvalidArgument(ValueError):
    pass


class OutOfRange(ValueError):
    """A query reached past the data available in a sieve table."""

    def __init__(self, msg, needed_limit=None):
        super().__init__(msg)
        self.needed_limit = needed_limit


class ResourceLimitError(MemoryError):
    def __init__(self, msg, cap):
        super().__init__(msg)
        self.cap = cap


class DegenerateParameters(ValueError):
    pass


class InvalidSetError(ValueError):
    """Resonance-set members violate the frequency window hypothesis."""

    def __init__(self, msg, offending):
        super().__init__(msg)
        self.offending = list(offending)


class LimitTooSmallError(ValueError):
    def __init__(self, msg, required_limit):
        super().__init__(msg)
        self.required_limit = required_limit


class PrecisionLossError(ArithmeticError):
    pass


class RangeOverflowError(OverflowError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, msg, count, best=None):
        super().__init__(msg)
        self.count = count
        self.best = best


class ApproxNotFound(RuntimeError):
    """No certified simultaneous approximation; ``best`` holds the near miss."""

    def __init__(self, msg, best=None, diagnostics=None):
        super().__init__(msg)
        self.best = best
        self.diagnostics = diagnostics or {}


class ReductionError(RuntimeError):
    pass


class TruncationWarning(UserWarning):
    def __init__(self, msg, tail_bound):
        super().__init__(msg)
        self.tail_bound = tail_bound


class DegenerateSetWarning(UserWarning):
    pass
