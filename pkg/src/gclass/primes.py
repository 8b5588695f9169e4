"""Prime table, primality and smallest-prime-factor queries.

The table is a plain Eratosthenes bitmap up to ``limit``.  Queries above
``limit`` fall back to trial division by the tabulated primes, which is
complete for every ``x <= limit**2``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterator

import numpy as np

from .errors import ArithmeticOverflowError, InvalidInputError, ResourceLimitError, TableBoundError

__all__ = [
    "MAX_N",
    "U64_MAX",
    "DEFAULT_TABLE_LIMIT_CAP",
    "PrimeTable",
    "build_prime_table",
    "table_limit_cap",
    "is_prime",
    "smallest_prime_factor",
    "check_u64",
    "prime_factor_below",
]

U64_MAX = 2**64 - 1

# Largest n accepted anywhere.  The biggest intermediate is g((n-1)^2, p) < n^2 + 2n,
# and the expanded G-number form needs n^2 + (p1+1)^2 <= 2n^2 + 2n + 1; both fit in
# 64 bits (and the latter in a signed int64 for the compiled kernel) for n <= 2^31.
MAX_N = 2**31

# ~100 MB bitmap + ~45 MB of int64 primes; GCLASS_TABLE_LIMIT overrides.
DEFAULT_TABLE_LIMIT_CAP = 10**8

_SMALL_BOUND = 2**16


def table_limit_cap() -> int:
    raw = os.environ.get("GCLASS_TABLE_LIMIT")
    if raw is None or raw.strip() == "":
        return DEFAULT_TABLE_LIMIT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InvalidInputError(f"GCLASS_TABLE_LIMIT must be an integer, got {raw!r}") from None
    if cap < 2:
        raise InvalidInputError(f"GCLASS_TABLE_LIMIT must be >= 2, got {cap}")
    return cap


def check_u64(value: int, what: str = "value") -> int:
    if value < 0 or value > U64_MAX:
        raise ArithmeticOverflowError(f"{what} = {value} does not fit in unsigned 64-bit arithmetic")
    return value


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes up to ``limit`` (inclusive), ascending.

    ``primes`` is a read-only int64 array; ``bitmap[i]`` is True iff ``i`` is prime.
    Instances are immutable and may be shared freely between threads or pickled
    into worker processes.
    """

    limit: int
    primes: np.ndarray = field(repr=False)
    bitmap: np.ndarray = field(repr=False)
    # Python ints for the trial-division hot path (primes below 2**16)
    small: tuple = field(repr=False, default=())

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self.primes)

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, (int, np.integer)):
            return False
        x = int(x)
        return 0 <= x <= self.limit and bool(self.bitmap[x])

    def odd_primes_upto(self, n: int) -> np.ndarray:
        """Odd primes ``<= n`` as a view, ascending."""
        hi = int(np.searchsorted(self.primes, n, side="right"))
        return self.primes[1:hi]

    def __repr__(self) -> str:
        return f"PrimeTable(limit={self.limit}, count={len(self.primes)})"


def build_prime_table(limit: int, *, max_limit: int | None = None) -> PrimeTable:
    """Sieve all primes ``<= limit``.

    Raises ``InvalidInputError`` for ``limit < 2`` and ``ResourceLimitError``
    when ``limit`` exceeds ``max_limit`` (default: :func:`table_limit_cap`).
    """
    limit = int(limit)
    if limit < 2:
        raise InvalidInputError(f"prime table limit must be >= 2, got {limit}")
    cap = table_limit_cap() if max_limit is None else max_limit
    if limit > cap:
        raise ResourceLimitError(
            f"prime table limit {limit} exceeds the configured cap {cap} (set GCLASS_TABLE_LIMIT to raise it)"
        )
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for i in range(3, isqrt(limit) + 1, 2):
        if sieve[i]:
            sieve[i * i :: 2 * i] = False
    primes = np.flatnonzero(sieve).astype(np.int64)
    sieve.flags.writeable = False
    primes.flags.writeable = False
    small = tuple(primes[primes < _SMALL_BOUND].tolist())
    return PrimeTable(limit=limit, primes=primes, bitmap=sieve, small=small)


def _check_certifiable(x: int, table: PrimeTable) -> None:
    if x > table.limit * table.limit:
        raise TableBoundError(
            f"{x} exceeds limit**2 = {table.limit * table.limit}; trial division by the table is incomplete"
        )


def _trial_spf(x: int, table: PrimeTable) -> int:
    root = isqrt(x)
    for p in table.small:
        if p > root:
            return x
        if x % p == 0:
            return p
    if root < _SMALL_BOUND:
        return x
    lo = len(table.small)
    hi = int(np.searchsorted(table.primes, root, side="right"))
    for p in table.primes[lo:hi].tolist():
        if x % p == 0:
            return p
    return x


def is_prime(x: int, table: PrimeTable) -> bool:
    x = int(x)
    if x < 0:
        raise InvalidInputError(f"is_prime expects a nonnegative integer, got {x}")
    if x <= table.limit:
        return bool(table.bitmap[x])
    _check_certifiable(x, table)
    return _trial_spf(x, table) == x


def smallest_prime_factor(x: int, table: PrimeTable) -> int:
    """Least prime dividing ``x``, for ``2 <= x <= table.limit**2``."""
    x = int(x)
    if x < 2:
        raise InvalidInputError(f"smallest_prime_factor expects x >= 2, got {x}")
    if x <= table.limit and table.bitmap[x]:
        return x
    if x % 2 == 0:
        return 2
    _check_certifiable(x, table)
    return _trial_spf(x, table)


def prime_factor_below(x: int, bound: int, table: PrimeTable) -> int | None:
    """Least prime factor of ``x`` that is ``< bound``, or None if there is none.

    Only primes ``<= isqrt(x)`` are tried, so a prime ``x < bound`` is reported
    as None; callers that care check ``x`` itself.
    """
    stop = min(bound - 1, isqrt(x))
    if stop > table.limit:
        raise TableBoundError(f"trial division of {x} below {bound} needs primes beyond limit {table.limit}")
    for p in table.small:
        if p > stop:
            return None
        if x % p == 0:
            return p
    if stop < _SMALL_BOUND:
        return None
    lo = len(table.small)
    hi = int(np.searchsorted(table.primes, stop, side="right"))
    for p in table.primes[lo:hi].tolist():
        if x % p == 0:
            return p
    return None
