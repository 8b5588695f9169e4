"""G numbers: even numbers whose Goldbach decomposition falls out of the g(x, p) construction."""

from .errors import (
    ArithmeticOverflowError,
    ConsistencyError,
    GClassError,
    InvalidInputError,
    NotAGNumberError,
    ResourceLimitError,
    TableBoundError,
    TheoremViolationError,
)
from .gcore import Decomposition, GRecord, decompose, g_of, is_g_number, p1_of
from .kernels import BACKEND
from .primes import PrimeTable, build_prime_table, is_prime, smallest_prime_factor

__version__ = "0.1.0"
