"""Empirical checks of the G-number lemmas and theorems over ranges of n.

Every checker returns a :class:`VerificationReport`.  Inequalities involving
square or cube roots are compared in exact integer form.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from .errors import InvalidInputError, TableBoundError
from .gcore import Decomposition, g_of
from .kernels import RangeResult
from .primes import PrimeTable, is_prime, smallest_prime_factor
from .scan import DEFAULT_CHUNK, evaluate_chunks

__all__ = [
    "CLAIMS",
    "DEFAULT_MAX_VIOLATIONS",
    "VerificationReport",
    "lemma1_oracle",
    "goldbach_oracle",
    "check_lemma1",
    "check_lemma2",
    "check_lemma3",
    "check_lemma4",
    "check_lemma5_theorem1",
    "check_theorem2",
    "run_claims",
]

log = logging.getLogger(__name__)

CLAIMS = ("L1", "L2", "L3", "L4", "L5", "T1", "T2")
DEFAULT_MAX_VIOLATIONS = 32


@dataclass
class VerificationReport:
    claim_id: str
    range: tuple[int, int]
    checked_count: int = 0
    violations: list[tuple[int, str]] = field(default_factory=list)
    violation_count: int = 0
    max_violations: int = DEFAULT_MAX_VIOLATIONS
    # claim-specific counters; informational, never affect `passed`
    stats: dict = field(default_factory=dict)
    # L4 only: failures at non-G numbers when not in strict mode
    non_g_violations: list[tuple[int, str]] = field(default_factory=list)

    def __post_init__(self):
        if self.claim_id not in CLAIMS:
            raise InvalidInputError(f"unknown claim {self.claim_id!r}")
        self.range = (int(self.range[0]), int(self.range[1]))
        if self.range[0] > self.range[1]:
            raise InvalidInputError(f"empty range {self.range}")

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def add(self, n: int, detail: str) -> None:
        self.violation_count += 1
        if len(self.violations) < self.max_violations:
            self.violations.append((n, detail))

    def bump(self, key: str, by: int = 1) -> None:
        self.stats[key] = self.stats.get(key, 0) + by

    def merge(self, other: VerificationReport) -> VerificationReport:
        """Associative, order-insensitive combination of two reports for the same claim."""
        if other.claim_id != self.claim_id:
            raise InvalidInputError("cannot merge reports for different claims")
        cap = max(self.max_violations, other.max_violations)
        stats = dict(self.stats)
        for k, v in other.stats.items():
            stats[k] = stats.get(k, 0) + v
        return VerificationReport(
            claim_id=self.claim_id,
            range=(min(self.range[0], other.range[0]), max(self.range[1], other.range[1])),
            checked_count=self.checked_count + other.checked_count,
            violations=sorted(self.violations + other.violations)[:cap],
            violation_count=self.violation_count + other.violation_count,
            max_violations=cap,
            stats=stats,
            non_g_violations=sorted(self.non_g_violations + other.non_g_violations)[:cap],
        )

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "range": list(self.range),
            "checked_count": self.checked_count,
            "passed": self.passed,
            "violation_count": self.violation_count,
            "violations": [[n, d] for n, d in self.violations],
            "non_g_violations": [[n, d] for n, d in self.non_g_violations],
            "max_violations": self.max_violations,
            "stats": dict(sorted(self.stats.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        rep = cls(
            claim_id=d["claim_id"],
            range=tuple(d["range"]),
            checked_count=d["checked_count"],
            violations=[(int(n), det) for n, det in d["violations"]],
            violation_count=d["violation_count"],
            max_violations=d["max_violations"],
            stats=dict(d["stats"]),
            non_g_violations=[(int(n), det) for n, det in d["non_g_violations"]],
        )
        if rep.passed != d["passed"]:
            raise InvalidInputError("report 'passed' flag contradicts its violation count")
        return rep

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.claim_id} [{self.range[0]}, {self.range[1]}] {status}: checked {self.checked_count}"
        if not self.passed:
            first = ", ".join(f"n={n}: {d}" for n, d in self.violations[:3])
            line += f", {self.violation_count} violation(s); first: {first}"
        return line


# ---------------------------------------------------------------- oracles


def lemma1_oracle(x: int, p: int) -> int:
    """Smallest odd multiple of p above x, by walking up from x + 1."""
    c = x + 1
    while c % p or (c // p) % 2 == 0:
        c += 1
    return c


def goldbach_oracle(two_n: int, table: PrimeTable) -> Decomposition | None:
    """Least Goldbach partition (q, 2n - q) by brute force over q, or None."""
    if isinstance(two_n, bool) or not isinstance(two_n, int) or two_n < 4 or two_n % 2:
        raise InvalidInputError(f"expected an even integer >= 4, got {two_n!r}")
    if two_n > 2 * table.limit:
        raise TableBoundError(f"{two_n} exceeds 2 * table limit {2 * table.limit}")
    if two_n == 4:
        return Decomposition(4, 2, 2)
    for q in table.odd_primes_upto(two_n // 2).tolist():
        if is_prime(two_n - q, table):
            return Decomposition(two_n, q, two_n - q)
    log.error("no Goldbach partition found for %d: this would be a counterexample", two_n)
    return None


# ---------------------------------------------------------------- checkers


def _validate(n_lo: int, n_hi: int, table: PrimeTable) -> None:
    if not 3 <= n_lo <= n_hi:
        raise InvalidInputError(f"need 3 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]")
    if n_hi > table.limit:
        raise TableBoundError(f"n_hi = {n_hi} exceeds the prime table limit {table.limit}")


def _rows(chunk: RangeResult):
    return zip(
        chunk.n.tolist(),
        chunk.p1.tolist(),
        chunk.g_value.tolist(),
        chunk.k1.tolist(),
        chunk.is_g.tolist(),
    )


def check_lemma1(
    sample_count: int,
    x_bound: int,
    p_bound: int,
    seed: int,
    *,
    forced: list[tuple[int, int]] | tuple = (),
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> VerificationReport:
    """Compare g_of against :func:`lemma1_oracle` on seeded random (x, p) pairs.

    ``forced`` pairs are checked first; ``sample_count`` random pairs follow,
    with x uniform in [2, x_bound] and p uniform over odd integers in [1, p_bound].
    """
    if sample_count < 0 or x_bound < 2 or p_bound < 1:
        raise InvalidInputError("need sample_count >= 0, x_bound >= 2, p_bound >= 1")
    rng = random.Random(seed)
    rep = VerificationReport("L1", (2, x_bound), max_violations=max_violations)
    pairs = list(forced)
    for _ in range(sample_count):
        pairs.append((rng.randint(2, x_bound), 2 * rng.randint(0, (p_bound - 1) // 2) + 1))
    for x, p in pairs:
        got, want = g_of(x, p), lemma1_oracle(x, p)
        rep.checked_count += 1
        if got != want:
            rep.add(x, f"g({x}, {p}) = {got}, oracle {want}")
    return rep


def check_lemma2(
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> VerificationReport:
    """For every n: g = p1 * k1, and p1 + k1 = 2n exactly when 2n is a G number."""
    _validate(n_lo, n_hi, table)
    rep = VerificationReport("L2", (n_lo, n_hi), max_violations=max_violations)
    for chunk in evaluate_chunks(n_lo, n_hi, table, chunk_size, workers):
        for n, p1, g, k1, is_g in _rows(chunk):
            rep.checked_count += 1
            if g != p1 * k1:
                rep.add(n, f"g = {g} != p1 * k1 = {p1} * {k1}")
            elif (p1 + k1 == 2 * n) != is_g:
                rep.add(n, f"p1 + k1 = {p1 + k1} vs 2n = {2 * n} but is_g = {is_g}")
    return rep


def check_lemma3(
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> VerificationReport:
    """G numbers satisfy p1 > n - sqrt(2n - 1), and p1^3 > n^2 once n > 7."""
    _validate(n_lo, n_hi, table)
    rep = VerificationReport("L3", (n_lo, n_hi), max_violations=max_violations)
    for chunk in evaluate_chunks(n_lo, n_hi, table, chunk_size, workers):
        for n, p1, _g, _k1, is_g in _rows(chunk):
            if not is_g:
                continue
            rep.checked_count += 1
            # p1 > n - sqrt(2n-1)  <=>  p1 >= n  or  (n - p1)^2 < 2n - 1
            if p1 < n and (n - p1) ** 2 >= 2 * n - 1:
                rep.add(n, f"p1 = {p1} <= n - sqrt(2n-1): (n-p1)^2 = {(n - p1) ** 2} >= {2 * n - 1}")
            elif n > 7 and p1**3 <= n * n:
                rep.add(n, f"p1^3 = {p1 ** 3} <= n^2 = {n * n}")
    return rep


def check_lemma4(
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    *,
    strict: bool = False,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> VerificationReport:
    """spf(g((n-1)^2, p1)) = p1 for every n in range.

    Failures at G numbers always count.  Failures at non-G numbers are kept in
    ``non_g_violations`` and only fail the report when ``strict`` is set.
    """
    _validate(n_lo, n_hi, table)
    rep = VerificationReport("L4", (n_lo, n_hi), max_violations=max_violations)
    rep.stats.update(g_checked=0, non_g_checked=0, non_g_violation_count=0)
    for chunk in evaluate_chunks(n_lo, n_hi, table, chunk_size, workers):
        for n, p1, g, k1, is_g in _rows(chunk):
            rep.checked_count += 1
            rep.bump("g_checked" if is_g else "non_g_checked")
            if g % p1:
                spf = smallest_prime_factor(g, table)
            else:
                # spf(a*b) = min(spf(a), spf(b)); keeps every factor k1 <= limit^2
                spf = min(smallest_prime_factor(p1, table), smallest_prime_factor(k1, table))
            if spf == p1:
                continue
            detail = f"spf(g) = {spf} != p1 = {p1} (g = {g}, {'G' if is_g else 'non-G'})"
            if is_g or strict:
                rep.add(n, detail)
            if not is_g:
                rep.bump("non_g_violation_count")
                if len(rep.non_g_violations) < rep.max_violations:
                    rep.non_g_violations.append((n, detail))
    return rep


def check_lemma5_theorem1(
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    *,
    claim_id: str = "T1",
    compare_oracle: bool = True,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> VerificationReport:
    """Every G number 2n in range is p1 + k1 with both parts prime.

    Also checks the inequality chain behind it: for n > 7 with n composite,
    p1^3 > n^2 > g((n-1)^2, p1); for prime n, p1 = k1 = n.  With
    ``compare_oracle`` the decomposition is cross-checked against the
    brute-force Goldbach oracle, and how often it coincides with the least
    partition is counted in ``stats``.
    """
    if claim_id not in ("L5", "T1"):
        raise InvalidInputError(f"claim_id must be 'L5' or 'T1', got {claim_id!r}")
    _validate(n_lo, n_hi, table)
    rep = VerificationReport(claim_id, (n_lo, n_hi), max_violations=max_violations)
    for chunk in evaluate_chunks(n_lo, n_hi, table, chunk_size, workers):
        for n, p1, g, k1, is_g in _rows(chunk):
            if not is_g:
                continue
            rep.checked_count += 1
            two_n = 2 * n
            if p1 + k1 != two_n:
                rep.add(n, f"p1 + k1 = {p1} + {k1} != {two_n}")
                continue
            if not is_prime(p1, table):
                rep.add(n, f"p1 = {p1} is not prime")
                continue
            if not is_prime(k1, table):
                rep.add(n, f"k1 = {k1} is not prime ({two_n} = {p1} + {k1})")
                continue
            if n > 7:
                if table.bitmap[n]:
                    if p1 != n or k1 != n:
                        rep.add(n, f"prime n but (p1, k1) = ({p1}, {k1})")
                        continue
                elif not p1**3 > n * n > g:
                    rep.add(n, f"chain p1^3 > n^2 > g fails: {p1 ** 3}, {n * n}, {g}")
                    continue
            if compare_oracle:
                least = goldbach_oracle(two_n, table)
                if least is None:
                    rep.add(n, f"no Goldbach partition of {two_n} found by the oracle")
                    continue
                if not (is_prime(least.first, table) and is_prime(least.second, table)):
                    rep.add(n, f"oracle partition {least} is not a pair of primes")
                    continue
                rep.bump("matches_least_partition", int(least.first == min(p1, k1)))
    return rep


def check_theorem2(
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> VerificationReport:
    """For every prime n: g((n-1)^2, n) = n^2, p1 = n, 2n is a G number and 2n = n + n."""
    _validate(n_lo, n_hi, table)
    rep = VerificationReport("T2", (n_lo, n_hi), max_violations=max_violations)
    for chunk in evaluate_chunks(n_lo, n_hi, table, chunk_size, workers):
        for n, p1, _g, k1, is_g in _rows(chunk):
            if not table.bitmap[n]:
                continue
            rep.checked_count += 1
            sq = g_of((n - 1) ** 2, n)
            if sq != n * n:
                rep.add(n, f"g((n-1)^2, n) = {sq} != n^2 = {n * n}")
            elif p1 != n:
                rep.add(n, f"p1 = {p1} != n")
            elif not is_g:
                rep.add(n, "2n is not a G number")
            elif k1 != n:
                rep.add(n, f"decomposition is ({p1}, {k1}), not ({n}, {n})")
    return rep


def run_claims(
    claims,
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    *,
    seed: int = 1,
    samples: int = 10_000,
    strict_lemma4: bool = False,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
    max_violations: int = DEFAULT_MAX_VIOLATIONS,
) -> list[VerificationReport]:
    """Run the named claims in the canonical order L1..T2."""
    claims = set(claims)
    unknown = claims - set(CLAIMS)
    if unknown:
        raise InvalidInputError(f"unknown claim(s): {', '.join(sorted(unknown))}")
    common = dict(chunk_size=chunk_size, workers=workers, max_violations=max_violations)
    reports = []
    for claim in CLAIMS:
        if claim not in claims:
            continue
        if claim == "L1":
            reports.append(check_lemma1(samples, 10**6, 999, seed, max_violations=max_violations))
        elif claim == "L2":
            reports.append(check_lemma2(n_lo, n_hi, table, **common))
        elif claim == "L3":
            reports.append(check_lemma3(n_lo, n_hi, table, **common))
        elif claim == "L4":
            reports.append(check_lemma4(n_lo, n_hi, table, strict=strict_lemma4, **common))
        elif claim in ("L5", "T1"):
            reports.append(check_lemma5_theorem1(n_lo, n_hi, table, claim_id=claim, **common))
        else:
            reports.append(check_theorem2(n_lo, n_hi, table, **common))
    return reports
