# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled range kernel: p1, witness and the G-number test for every n in a range."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t


cdef inline uint64_t _spf_odd_multiple(uint64_t m, uint64_t p, const int64_t[::1] primes,
                                       Py_ssize_t nprimes) noexcept nogil:
    # spf(m*p) for prime p and odd m; trial division of m stops at p or sqrt(m)
    cdef Py_ssize_t i = 1
    cdef uint64_t q
    while i < nprimes:
        q = <uint64_t>primes[i]
        if q >= p:
            return p
        if q * q > m:
            break
        if m % q == 0:
            return q
        i += 1
    if 1 < m < p:
        return m
    return p


def evaluate_range(int64_t n_lo, int64_t n_hi, const int64_t[::1] primes):
    """Arrays (p1, witness, g_value, k1, is_g, is_g_expanded) for n in [n_lo, n_hi].

    ``primes`` must be the ascending primes of a table covering ``n_hi``.
    """
    cdef Py_ssize_t count = n_hi - n_lo + 1
    cdef Py_ssize_t nprimes = primes.shape[0]
    p1_arr = np.empty(count, dtype=np.int64)
    wit_arr = np.empty(count, dtype=np.int64)
    g_arr = np.empty(count, dtype=np.int64)
    k1_arr = np.empty(count, dtype=np.int64)
    isg_arr = np.empty(count, dtype=np.bool_)
    exp_arr = np.empty(count, dtype=np.bool_)
    cdef int64_t[::1] p1_v = p1_arr
    cdef int64_t[::1] wit_v = wit_arr
    cdef int64_t[::1] g_v = g_arr
    cdef int64_t[::1] k1_v = k1_arr
    cdef unsigned char[::1] isg_v = isg_arr.view(np.uint8)
    cdef unsigned char[::1] exp_v = exp_arr.view(np.uint8)

    cdef Py_ssize_t idx, j
    cdef Py_ssize_t top = 0  # index of the largest prime <= n
    cdef uint64_t n, x, p, g, f, best, witness, r, rhs
    with nogil:
        for idx in range(count):
            n = <uint64_t>(n_lo + idx)
            while top + 1 < nprimes and <uint64_t>primes[top + 1] <= n:
                top += 1
            x = (n - 1) * (n - 1)
            best = 0
            witness = 0
            j = top
            while j >= 1:
                p = <uint64_t>primes[j]
                if p < best:
                    break
                g = x + 2 * p - (x - p) % (2 * p)
                f = _spf_odd_multiple(g / p, p, primes, nprimes)
                if f >= best:
                    best = f
                    witness = p
                j -= 1
            g = x + 2 * best - (x - best) % (2 * best)
            p1_v[idx] = <int64_t>best
            wit_v[idx] = <int64_t>witness
            g_v[idx] = <int64_t>g
            k1_v[idx] = <int64_t>(g / best)
            isg_v[idx] = g == best * (2 * n - best)
            r = (x - best) % (2 * best)
            rhs = n * n + (best + 1) * (best + 1) - 2 * n * best - r
            exp_v[idx] = rhs == 2 * n
    return p1_arr, wit_arr, g_arr, k1_arr, isg_arr, exp_arr
