"""Time the compiled and pure-Python range kernels on the same range.

    python benchmarks/bench_kernels.py --to 200000
"""

import argparse
import time

import numpy as np

from gclass.kernels import available_backends, evaluate_range
from gclass.primes import build_prime_table


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--from", dest="n_lo", type=int, default=3)
    ap.add_argument("--to", dest="n_hi", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    table = build_prime_table(args.n_hi)
    count = args.n_hi - args.n_lo + 1
    results = {}
    for backend in available_backends():
        # the pure loop is slow, one pass is enough
        repeat = args.repeat if backend == "cython" else 1
        dt, res = best_of(lambda: evaluate_range(args.n_lo, args.n_hi, table, backend), repeat)
        results[backend] = (dt, res)
        print(f"{backend:>7}: {dt:8.3f} s  {count / dt:12,.0f} n/s")

    if len(results) == 2:
        (c, rc), (p, rp) = results["cython"], results["python"]
        for f in ("p1", "witness", "g_value", "k1", "is_g"):
            np.testing.assert_array_equal(getattr(rc, f), getattr(rp, f))
        print(f"speedup: {p / c:.1f}x (outputs identical)")


if __name__ == "__main__":
    main()
