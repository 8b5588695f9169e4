"""g(x, p), the derived prime p1(n), the G-number predicate and its decomposition."""

from __future__ import annotations

import operator
from dataclasses import asdict, dataclass

from .errors import (
    ArithmeticOverflowError,
    ConsistencyError,
    InvalidInputError,
    NotAGNumberError,
    TableBoundError,
    TheoremViolationError,
)
from .primes import MAX_N, U64_MAX, PrimeTable, is_prime, prime_factor_below

__all__ = [
    "GRecord",
    "Decomposition",
    "g_of",
    "p1_of",
    "is_g_number",
    "expanded_form_rhs",
    "decompose",
    "RECORD_FIELDS",
]

RECORD_FIELDS = ("n", "two_n", "p1", "g_value", "k1", "is_g", "witness_p")


@dataclass(frozen=True)
class GRecord:
    n: int
    two_n: int
    p1: int
    g_value: int
    k1: int
    is_g: bool
    witness_p: int

    def as_row(self) -> tuple:
        return (self.n, self.two_n, self.p1, self.g_value, self.k1, self.is_g, self.witness_p)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Decomposition:
    two_n: int
    first: int
    second: int

    def __str__(self) -> str:
        return f"{self.two_n} = {self.first} + {self.second}"


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise InvalidInputError(f"{name} must be an integer, got {value!r}")
    try:
        return operator.index(value)
    except TypeError:
        raise InvalidInputError(f"{name} must be an integer, got {value!r}") from None


def g_of(x: int, p: int) -> int:
    """Smallest odd multiple of the odd integer ``p`` strictly exceeding ``x``.

    Evaluated as ``x + 2p - ((x - p) mod 2p)`` with a nonnegative remainder,
    so the result is also correct when ``p > x``.
    """
    x = _as_int(x, "x")
    p = _as_int(p, "p")
    if p < 1 or p % 2 == 0:
        raise InvalidInputError(f"p must be a positive odd integer, got {p}")
    if x < 2:
        raise InvalidInputError(f"x must be > 1, got {x}")
    if x + 2 * p > U64_MAX:
        raise ArithmeticOverflowError(f"x + 2p = {x + 2 * p} overflows 64 bits")
    return x + 2 * p - (x - p) % (2 * p)


def _spf_of_odd_multiple(g: int, p: int, table: PrimeTable) -> int:
    # g = m*p with p prime, so spf(g) = min(p, spf(m)); only factors of m below p matter
    m = g // p
    q = prime_factor_below(m, p, table)
    if q is not None:
        return q
    if 1 < m < p:
        return m
    return p


def _check_n(n: int, table: PrimeTable) -> int:
    n = _as_int(n, "n")
    if n <= 2:
        raise InvalidInputError(f"n must be > 2 (no odd primes <= {n}), got {n}")
    if n > MAX_N:
        raise ArithmeticOverflowError(f"n = {n} exceeds the 64-bit cap {MAX_N}")
    if n > table.limit:
        raise TableBoundError(f"n = {n} exceeds the prime table limit {table.limit}")
    return n


def p1_of(n: int, table: PrimeTable) -> tuple[int, int]:
    """Return ``(p1, witness_p)`` for ``n > 2``.

    ``p1`` is the maximum of spf(g((n-1)^2, p)) over odd primes ``p <= n`` and
    ``witness_p`` the smallest such ``p`` attaining it.  Primes are visited in
    descending order; since spf(g((n-1)^2, p)) <= p, the loop stops once the
    running maximum exceeds the current ``p``.
    """
    n = _check_n(n, table)
    x = (n - 1) * (n - 1)
    best = 0
    witness = 0
    for p in reversed(table.odd_primes_upto(n).tolist()):
        if p < best:
            break
        f = _spf_of_odd_multiple(g_of(x, p), p, table)
        if f >= best:
            best = f
            witness = p
    return best, witness


def expanded_form_rhs(n: int, p1: int) -> int:
    """``n^2 + (p1+1)^2 - 2n*p1 - ((n-1)^2 - p1) mod 2p1``; equals 2n exactly for G numbers."""
    return n * n + (p1 + 1) ** 2 - 2 * n * p1 - ((n - 1) ** 2 - p1) % (2 * p1)


def is_g_number(two_n: int, table: PrimeTable) -> GRecord:
    two_n = _as_int(two_n, "two_n")
    if two_n % 2 or two_n < 6:
        raise InvalidInputError(f"expected an even number >= 6, got {two_n}")
    n = two_n // 2
    p1, witness = p1_of(n, table)
    g_value = g_of((n - 1) * (n - 1), p1)
    k1 = g_value // p1
    product_form = g_value == p1 * (two_n - p1)
    expanded_form = expanded_form_rhs(n, p1) == two_n
    if product_form != expanded_form:
        raise ConsistencyError(
            f"G-number forms disagree at 2n={two_n}: product={product_form}, expanded={expanded_form}"
        )
    return GRecord(n, two_n, p1, g_value, k1, product_form, witness)


def decompose(record: GRecord, table: PrimeTable) -> Decomposition:
    if not record.is_g:
        raise NotAGNumberError(f"{record.two_n} is not a G number; no decomposition is claimed")
    if record.p1 + record.k1 != record.two_n:
        raise ConsistencyError(f"p1 + k1 = {record.p1 + record.k1} != {record.two_n}")
    if not is_prime(record.p1, table):
        raise TheoremViolationError(record.two_n, record.p1, record.k1, f"p1 = {record.p1} is not prime")
    if not is_prime(record.k1, table):
        raise TheoremViolationError(record.two_n, record.p1, record.k1)
    return Decomposition(record.two_n, record.p1, record.k1)
