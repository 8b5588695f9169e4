import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gclass import build_prime_table, is_prime, smallest_prime_factor
from gclass.errors import InvalidInputError, ResourceLimitError, TableBoundError
from gclass.primes import prime_factor_below, table_limit_cap

from oracles import naive_is_prime, naive_primes, naive_spf


def test_small_tables():
    assert list(build_prime_table(10)) == [2, 3, 5, 7]
    assert list(build_prime_table(2)) == [2]
    assert list(build_prime_table(3)) == [2, 3]


@pytest.mark.parametrize("limit", [2, 3, 4, 29, 30, 97, 1000, 4096, 10**4])
def test_table_matches_trial_division(limit):
    assert list(build_prime_table(limit)) == naive_primes(limit)


def test_million_count_against_trial_division_counter(big_table):
    # trial division by every prime <= 1000, vectorised over the candidates
    xs = np.arange(2, 10**6 + 1, dtype=np.int64)
    keep = np.ones_like(xs, dtype=bool)
    for d in naive_primes(1000):
        keep &= (xs % d != 0) | (xs == d)
    expected = int(keep.sum())
    assert expected == 78498
    assert len(big_table) == expected
    assert big_table.limit == 10**6


def test_table_invariants(table):
    ps = table.primes
    assert (np.diff(ps) > 0).all()
    assert table.bitmap.sum() == len(ps)
    assert not ps.flags.writeable and not table.bitmap.flags.writeable
    assert 9973 in table and 9971 not in table and -3 not in table and "7" not in table


def test_build_errors(monkeypatch):
    with pytest.raises(InvalidInputError):
        build_prime_table(1)
    with pytest.raises(ResourceLimitError):
        build_prime_table(1000, max_limit=999)
    monkeypatch.setenv("GCLASS_TABLE_LIMIT", "500")
    assert table_limit_cap() == 500
    with pytest.raises(ResourceLimitError):
        build_prime_table(501)
    build_prime_table(500)
    monkeypatch.setenv("GCLASS_TABLE_LIMIT", "lots")
    with pytest.raises(InvalidInputError):
        table_limit_cap()


def test_resource_error_is_distinct_from_invalid_input():
    assert not issubclass(ResourceLimitError, ValueError)
    assert issubclass(ResourceLimitError, MemoryError)


@pytest.mark.parametrize("x, expected", [(37, True), (1, False), (0, False), (2, True), (1073, False)])
def test_is_prime_examples(table, x, expected):
    assert is_prime(x, table) is expected


@pytest.mark.parametrize("x, expected", [(1073, 29), (9, 3), (117, 3), (2, 2), (10**8 - 1, 3)])
def test_spf_examples(table, x, expected):
    assert smallest_prime_factor(x, table) == expected


def test_bounds():
    t = build_prime_table(100)
    assert is_prime(9973, t)  # 9973 <= 100**2
    assert smallest_prime_factor(10**4, t) == 2
    with pytest.raises(TableBoundError):
        is_prime(10**4 + 1, t)
    with pytest.raises(TableBoundError):
        smallest_prime_factor(10**4 + 1, t)
    with pytest.raises(InvalidInputError):
        smallest_prime_factor(1, t)
    with pytest.raises(InvalidInputError):
        is_prime(-5, t)


def test_above_limit_uses_primes_beyond_small_cache(big_table):
    # 999983 is the largest prime below 10^6; its square needs the full table
    p = 999983
    assert smallest_prime_factor(p * p, big_table) == p
    assert is_prime(999999000001, big_table) is naive_is_prime(999999000001)


def test_spf_random_samples(table):
    rng = random.Random(7)
    for _ in range(2000):
        x = rng.randint(2, 10**8)
        spf = smallest_prime_factor(x, table)
        assert x % spf == 0
        assert spf == naive_spf(x)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=2, max_value=10**8))
def test_is_prime_iff_spf_is_self(x):
    t = _TABLE
    assert is_prime(x, t) == (smallest_prime_factor(x, t) == x)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=2, max_value=10**8), st.integers(min_value=2, max_value=10**4))
def test_prime_factor_below(x, bound):
    got = prime_factor_below(x, bound, _TABLE)
    small = [q for q in range(2, min(bound, int(x**0.5) + 1)) if x % q == 0 and naive_is_prime(q)]
    assert got == (small[0] if small else None)


_TABLE = build_prime_table(10**4)
