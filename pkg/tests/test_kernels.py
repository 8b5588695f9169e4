import os
import subprocess
import sys

import numpy as np
import pytest

from gclass import PrimeTable, build_prime_table, is_g_number
from gclass.errors import ArithmeticOverflowError, InvalidInputError, TableBoundError
from gclass.kernels import BACKEND, available_backends, evaluate_range

from oracles import brute_record

BACKENDS = available_backends()
FIELDS = ("p1", "witness", "g_value", "k1", "is_g")


@pytest.mark.parametrize("backend", BACKENDS)
def test_kernel_matches_brute_force(table, backend):
    res = evaluate_range(3, 300, table, backend)
    for i, n in enumerate(range(3, 301)):
        _, _, p1, g, k1, is_g, w = brute_record(n)
        assert (res.p1[i], res.witness[i], res.g_value[i], res.k1[i], res.is_g[i]) == (p1, w, g, k1, is_g)


@pytest.mark.parametrize("backend", BACKENDS)
def test_kernel_matches_gcore(table, backend):
    res = evaluate_range(2000, 4000, table, backend)
    for i, n in enumerate(range(2000, 4001)):
        rec = is_g_number(2 * n, table)
        assert (rec.p1, rec.witness_p, rec.g_value, rec.k1, rec.is_g) == (
            res.p1[i], res.witness[i], res.g_value[i], res.k1[i], res.is_g[i]
        )


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled backend not built")
def test_backends_agree_at_scale(big_table):
    lo, hi = 999_000, 1_000_000
    a = evaluate_range(lo, hi, big_table, "cython")
    b = evaluate_range(lo, hi, big_table, "python")
    for f in FIELDS:
        np.testing.assert_array_equal(getattr(a, f), getattr(b, f), err_msg=f)


def test_range_is_split_invariant(table):
    whole = evaluate_range(3, 999, table)
    parts = [evaluate_range(lo, lo + 99 if lo > 3 else 99, table) for lo in [3] + list(range(100, 1000, 100))]
    for f in FIELDS:
        np.testing.assert_array_equal(getattr(whole, f), np.concatenate([getattr(p, f) for p in parts]))


def test_evaluate_range_validation(table):
    with pytest.raises(InvalidInputError):
        evaluate_range(2, 10, table)
    with pytest.raises(InvalidInputError):
        evaluate_range(10, 9, table)
    with pytest.raises(TableBoundError):
        evaluate_range(3, 10**4 + 1, table)
    with pytest.raises(ArithmeticOverflowError):
        evaluate_range(3, 2**31 + 1, table)
    with pytest.raises(InvalidInputError):
        evaluate_range(3, 10, table, backend="fortran")


@pytest.mark.parametrize("backend", BACKENDS)
def test_near_cap_arithmetic_is_exact(backend):
    # n = 2^31 - 1 is prime: g = n^2 ~ 2^62 and the expanded form passes through ~2^63.
    # The kernel only visits n itself and the primes below sqrt(n), so a sparse table suffices.
    n = 2**31 - 1
    small = build_prime_table(46341)
    primes = np.append(small.primes, np.int64(n))
    primes.flags.writeable = False
    sparse = PrimeTable(limit=n, primes=primes, bitmap=small.bitmap, small=small.small)
    res = evaluate_range(n, n, sparse, backend)
    assert (res.p1[0], res.witness[0], res.g_value[0], res.k1[0], res.is_g[0]) == (n, n, n * n, n, True)


def test_env_var_forces_pure_python():
    env = dict(os.environ, GCLASS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import gclass.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_default_backend_prefers_compiled():
    if os.environ.get("GCLASS_PURE_PYTHON"):
        assert BACKEND == "python"
    else:
        assert BACKEND == BACKENDS[0]
