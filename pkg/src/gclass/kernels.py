"""Backend selection for the range kernel.

The compiled extension ``gclass._ccore`` is used when importable; otherwise,
or when the environment variable ``GCLASS_PURE_PYTHON`` is non-empty, the
pure-Python ``gclass._purecore`` takes its place.  Both expose
``evaluate_range(n_lo, n_hi, primes)`` with identical results.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _purecore
from .errors import ArithmeticOverflowError, ConsistencyError, InvalidInputError, TableBoundError
from .primes import MAX_N, PrimeTable

try:
    from . import _ccore
except ImportError:  # extension not built
    _ccore = None

__all__ = ["BACKEND", "available_backends", "RangeResult", "evaluate_range"]


def available_backends() -> list[str]:
    return (["cython"] if _ccore is not None else []) + ["python"]


def _default_backend() -> str:
    if os.environ.get("GCLASS_PURE_PYTHON") or _ccore is None:
        return "python"
    return "cython"


BACKEND = _default_backend()


@dataclass(frozen=True)
class RangeResult:
    """Column arrays for n in [n_lo, n_hi], aligned by position."""

    n_lo: int
    n_hi: int
    p1: np.ndarray
    witness: np.ndarray
    g_value: np.ndarray
    k1: np.ndarray
    is_g: np.ndarray

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_lo, self.n_hi + 1, dtype=np.int64)

    def __len__(self) -> int:
        return self.n_hi - self.n_lo + 1


def evaluate_range(n_lo: int, n_hi: int, table: PrimeTable, backend: str | None = None) -> RangeResult:
    if not 3 <= n_lo <= n_hi:
        raise InvalidInputError(f"need 3 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]")
    if n_hi > MAX_N:
        raise ArithmeticOverflowError(f"n = {n_hi} exceeds the 64-bit cap {MAX_N}")
    if n_hi > table.limit:
        raise TableBoundError(f"n = {n_hi} exceeds the prime table limit {table.limit}")
    backend = backend or BACKEND
    if backend == "cython":
        if _ccore is None:
            raise InvalidInputError("the compiled backend is not available")
        impl = _ccore.evaluate_range
    elif backend == "python":
        impl = _purecore.evaluate_range
    else:
        raise InvalidInputError(f"unknown backend {backend!r}")
    p1, wit, g, k1, is_g, is_g_exp = impl(n_lo, n_hi, table.primes)
    bad = np.flatnonzero(is_g != is_g_exp)
    if bad.size:
        n_bad = n_lo + int(bad[0])
        raise ConsistencyError(f"G-number forms disagree at n={n_bad} (2n={2 * n_bad})")
    return RangeResult(n_lo, n_hi, p1, wit, g, k1, is_g)
