"""Exception hierarchy shared by every gclass module."""


class GClassError(Exception):
    """Base class for all errors raised by gclass."""


class InvalidInputError(GClassError, ValueError):
    """An argument is outside the operation's declared domain."""


class TableBoundError(InvalidInputError):
    """A query exceeds what the prime table can certify (x > limit**2, n > limit)."""


class ResourceLimitError(GClassError, MemoryError):
    """A requested prime table would exceed the configured memory budget."""


class ArithmeticOverflowError(GClassError, OverflowError):
    """An intermediate value would not fit in unsigned 64-bit arithmetic."""


class ConsistencyError(GClassError):
    """Two formulations of the same quantity disagree (an internal bug)."""


class NotAGNumberError(InvalidInputError):
    """A decomposition was requested for an even number that is not a G number."""


class TheoremViolationError(GClassError):
    """A G number whose p1/k1 decomposition is not a pair of primes.

    This would be a counterexample to the main theorem and must never be
    silently swallowed.
    """

    def __init__(self, two_n, p1, k1, message=None):
        self.two_n = two_n
        self.p1 = p1
        self.k1 = k1
        super().__init__(message or f"{two_n} = {p1} + {k1} but {k1} is not prime")
