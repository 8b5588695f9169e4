"""Pure-Python fallback for the range kernel in ``_ccore.pyx``.

Same loop, same outputs; used when the extension is not built or when
``GCLASS_PURE_PYTHON`` is set.
"""

import numpy as np


def _spf_odd_multiple(m, p, primes):
    for q in primes:
        if q >= p:
            return p
        if q * q > m:
            break
        if m % q == 0:
            return q
    if 1 < m < p:
        return m
    return p


def evaluate_range(n_lo, n_hi, primes):
    """Arrays (p1, witness, g_value, k1, is_g, is_g_expanded) for n in [n_lo, n_hi]."""
    plist = np.asarray(primes).tolist()
    odd = plist[1:]
    count = n_hi - n_lo + 1
    p1_out = [0] * count
    wit_out = [0] * count
    g_out = [0] * count
    k1_out = [0] * count
    isg_out = [False] * count
    exp_out = [False] * count
    top = 0
    nprimes = len(plist)
    for idx in range(count):
        n = n_lo + idx
        while top + 1 < nprimes and plist[top + 1] <= n:
            top += 1
        x = (n - 1) * (n - 1)
        best = 0
        witness = 0
        for j in range(top, 0, -1):
            p = plist[j]
            if p < best:
                break
            g = x + 2 * p - (x - p) % (2 * p)
            f = _spf_odd_multiple(g // p, p, odd)
            if f >= best:
                best = f
                witness = p
        g = x + 2 * best - (x - best) % (2 * best)
        p1_out[idx] = best
        wit_out[idx] = witness
        g_out[idx] = g
        k1_out[idx] = g // best
        isg_out[idx] = g == best * (2 * n - best)
        rhs = n * n + (best + 1) ** 2 - 2 * n * best - (x - best) % (2 * best)
        exp_out[idx] = rhs == 2 * n
    return (
        np.array(p1_out, dtype=np.int64),
        np.array(wit_out, dtype=np.int64),
        np.array(g_out, dtype=np.int64),
        np.array(k1_out, dtype=np.int64),
        np.array(isg_out, dtype=bool),
        np.array(exp_out, dtype=bool),
    )
