"""Range scanning, summary statistics, p1 derivation tables and result files."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import ConsistencyError, GClassError, InvalidInputError, TableBoundError
from .gcore import RECORD_FIELDS, GRecord, g_of
from .kernels import RangeResult, evaluate_range
from .primes import PrimeTable, smallest_prime_factor

__all__ = [
    "SCHEMA_VERSION",
    "ScanSummary",
    "TableRow",
    "OutputError",
    "iter_chunks",
    "evaluate_chunks",
    "records_of",
    "scan_range",
    "scan_to_file",
    "p1_table",
    "write_results",
    "read_json",
    "records_to_csv",
    "table_to_csv",
    "json_document",
    "atomic_write",
    "render",
]

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_CHUNK = 50_000
DEFAULT_MAX_NON_G = 1000
CHECKPOINT_MIN_N = 10**6
JSON_SAFE_INT = 2**53
TABLE_FIELDS = ("p", "g_val", "f_val")


class OutputError(GClassError, OSError):
    """Writing a result file failed; ``path`` names the target."""

    def __init__(self, path, cause):
        self.path = str(path)
        super().__init__(f"cannot write {self.path}: {cause}")


@dataclass
class ScanSummary:
    n_lo: int
    n_hi: int
    total_even: int = 0
    g_count: int = 0
    non_g_n: list[int] = field(default_factory=list)
    non_g_total: int = 0
    prime_n_count: int = 0
    elapsed: float | None = None
    max_non_g: int = DEFAULT_MAX_NON_G

    @property
    def g_density(self) -> Fraction:
        if self.total_even == 0:
            return Fraction(0)
        return Fraction(self.g_count, self.total_even)

    def add_chunk(self, chunk: RangeResult, table: PrimeTable) -> None:
        ns = chunk.n
        self.total_even += len(chunk)
        self.g_count += int(chunk.is_g.sum())
        non_g = ns[~chunk.is_g]
        self.non_g_total += len(non_g)
        room = self.max_non_g - len(self.non_g_n)
        if room > 0:
            self.non_g_n.extend(non_g[:room].tolist())
        self.prime_n_count += int(table.bitmap[chunk.n_lo : chunk.n_hi + 1].sum())

    def merge(self, other: ScanSummary) -> ScanSummary:
        """Combine two summaries of disjoint ranges (order-insensitive)."""
        lo, hi = sorted((self, other), key=lambda s: s.n_lo)
        cap = max(self.max_non_g, other.max_non_g)
        elapsed = None
        if self.elapsed is not None or other.elapsed is not None:
            elapsed = (self.elapsed or 0.0) + (other.elapsed or 0.0)
        return ScanSummary(
            n_lo=min(self.n_lo, other.n_lo),
            n_hi=max(self.n_hi, other.n_hi),
            total_even=self.total_even + other.total_even,
            g_count=self.g_count + other.g_count,
            non_g_n=sorted(lo.non_g_n + hi.non_g_n)[:cap],
            non_g_total=self.non_g_total + other.non_g_total,
            prime_n_count=self.prime_n_count + other.prime_n_count,
            elapsed=elapsed,
            max_non_g=cap,
        )

    def to_dict(self, include_elapsed: bool = False) -> dict:
        d = {
            "n_lo": self.n_lo,
            "n_hi": self.n_hi,
            "total_even": self.total_even,
            "g_count": self.g_count,
            "g_density": str(self.g_density),
            "g_density_float": float(self.g_density),
            "non_g_total": self.non_g_total,
            "non_g_n": list(self.non_g_n),
            "prime_n_count": self.prime_n_count,
        }
        if include_elapsed:
            d["elapsed"] = self.elapsed
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ScanSummary:
        s = cls(
            n_lo=int(d["n_lo"]),
            n_hi=int(d["n_hi"]),
            total_even=int(d["total_even"]),
            g_count=int(d["g_count"]),
            non_g_n=[int(v) for v in d["non_g_n"]],
            non_g_total=int(d["non_g_total"]),
            prime_n_count=int(d["prime_n_count"]),
            elapsed=d.get("elapsed"),
        )
        if Fraction(d["g_density"]) != s.g_density:
            raise ConsistencyError("g_density does not match g_count/total_even")
        return s


@dataclass(frozen=True)
class TableRow:
    p: int
    g_val: int
    f_val: int

    def to_dict(self) -> dict:
        return {"p": self.p, "g_val": self.g_val, "f_val": self.f_val}


def iter_chunks(n_lo: int, n_hi: int, chunk_size: int) -> Iterator[tuple[int, int]]:
    if chunk_size < 1:
        raise InvalidInputError(f"chunk_size must be >= 1, got {chunk_size}")
    lo = n_lo
    while lo <= n_hi:
        hi = min(n_hi, lo + chunk_size - 1)
        yield lo, hi
        lo = hi + 1


_worker_table: PrimeTable | None = None


def _init_worker(table: PrimeTable) -> None:
    global _worker_table
    _worker_table = table


def _eval_in_worker(bounds: tuple[int, int], backend: str | None) -> RangeResult:
    return evaluate_range(bounds[0], bounds[1], _worker_table, backend)


def evaluate_chunks(
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
    backend: str | None = None,
) -> Iterator[RangeResult]:
    """Evaluate [n_lo, n_hi] chunk by chunk; results always come back in ascending n."""
    _check_range(n_lo, n_hi, table)
    if workers < 1:
        raise InvalidInputError(f"workers must be >= 1, got {workers}")
    bounds = list(iter_chunks(n_lo, n_hi, chunk_size))
    if workers == 1 or len(bounds) == 1:
        for lo, hi in bounds:
            yield evaluate_range(lo, hi, table, backend)
        return
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(table,)) as pool:
        # map() yields in submission order, which is the merge order
        yield from pool.map(_eval_in_worker, bounds, [backend] * len(bounds))


def _check_range(n_lo: int, n_hi: int, table: PrimeTable) -> None:
    if not 3 <= n_lo <= n_hi:
        raise InvalidInputError(f"need 3 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]")
    if n_hi > table.limit:
        raise TableBoundError(f"n = {n_hi} exceeds the prime table limit {table.limit}")


def records_of(chunk: RangeResult) -> Iterator[GRecord]:
    cols = zip(
        chunk.n.tolist(),
        chunk.p1.tolist(),
        chunk.g_value.tolist(),
        chunk.k1.tolist(),
        chunk.is_g.tolist(),
        chunk.witness.tolist(),
    )
    for n, p1, g, k1, is_g, w in cols:
        yield GRecord(n, 2 * n, p1, g, k1, is_g, w)


def scan_range(
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    chunk_size: int = DEFAULT_CHUNK,
    *,
    workers: int = 1,
    sink: Callable[[GRecord], object] | None = None,
    max_non_g: int = DEFAULT_MAX_NON_G,
    backend: str | None = None,
) -> ScanSummary:
    """Evaluate the G-number predicate for every n in [n_lo, n_hi].

    Records are passed to ``sink`` in ascending n.  The summary is identical for
    any ``chunk_size``/``workers`` combination.
    """
    start = time.perf_counter()
    summary = ScanSummary(n_lo, n_hi, max_non_g=max_non_g)
    for chunk in evaluate_chunks(n_lo, n_hi, table, chunk_size, workers, backend):
        summary.add_chunk(chunk, table)
        if sink is not None:
            for rec in records_of(chunk):
                sink(rec)
    summary.elapsed = time.perf_counter() - start
    return summary


def p1_table(n: int, table: PrimeTable) -> list[TableRow]:
    """One row (p, g((n-1)^2, p), spf of that) per odd prime p <= n, ascending."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidInputError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 3:
        raise InvalidInputError(f"n must be >= 3, got {n}")
    if n > table.limit:
        raise TableBoundError(f"n = {n} exceeds the prime table limit {table.limit}")
    x = (n - 1) * (n - 1)
    rows = []
    for p in table.odd_primes_upto(n).tolist():
        g = g_of(x, p)
        rows.append(TableRow(p, g, smallest_prime_factor(g, table)))
    return rows


# ---------------------------------------------------------------- serialization


def _csv_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _csv_text(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_value(v) for v in row])
    return buf.getvalue()


def records_to_csv(records: Iterable[GRecord], header: bool = True) -> str:
    text = _csv_text(RECORD_FIELDS, (r.as_row() for r in records))
    return text if header else text.split("\n", 1)[1]


def table_to_csv(rows: Iterable[TableRow]) -> str:
    return _csv_text(TABLE_FIELDS, ((r.p, r.g_val, r.f_val) for r in rows))


def _json_ints(obj):
    # integers at or above 2^53 lose precision as JSON numbers
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        obj = int(obj)
        return str(obj) if abs(obj) >= JSON_SAFE_INT else obj
    if isinstance(obj, dict):
        return {k: _json_ints(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ints(v) for v in obj]
    return obj


def json_document(kind: str, payload) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, "payload": _json_ints(payload)}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def read_json(path) -> tuple[str, object]:
    """Load a result document; returns ``(kind, payload)``."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InvalidInputError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return doc["kind"], doc["payload"]


def _classify(obj) -> str:
    if isinstance(obj, ScanSummary):
        return "summary"
    if hasattr(obj, "claim_id"):
        return "report"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "records"
        kinds = {_classify(o) for o in obj}
        if len(kinds) != 1:
            raise InvalidInputError("cannot mix result types in one file")
        kind = kinds.pop()
        return {"record": "records", "row": "table", "report": "reports"}[kind]
    if isinstance(obj, GRecord):
        return "record"
    if isinstance(obj, TableRow):
        return "row"
    raise InvalidInputError(f"don't know how to write {type(obj).__name__}")


def render(obj, fmt: str) -> str:
    """Text of ``obj`` in ``fmt`` ('csv' or 'json'), exactly as :func:`write_results` writes it."""
    kind = _classify(obj)
    if fmt == "csv":
        if kind == "records":
            return records_to_csv(obj)
        if kind == "record":
            return records_to_csv([obj])
        if kind == "table":
            return table_to_csv(obj)
        if kind == "summary":
            d = obj.to_dict()
            d["non_g_n"] = " ".join(str(v) for v in d["non_g_n"])
            return _csv_text(d.keys(), [d.values()])
        if kind in ("report", "reports"):
            reports = [obj] if kind == "report" else obj
            cols = ("claim_id", "n_lo", "n_hi", "checked_count", "violation_count", "passed")
            rows = ((r.claim_id, r.range[0], r.range[1], r.checked_count, r.violation_count, r.passed) for r in reports)
            return _csv_text(cols, rows)
    elif fmt == "json":
        if kind == "records":
            return json_document("scan", {"summary": None, "records": [r.to_dict() for r in obj]})
        if kind == "record":
            return json_document("check", obj.to_dict())
        if kind == "table":
            return json_document("table", [r.to_dict() for r in obj])
        if kind == "summary":
            return json_document("scan", {"summary": obj.to_dict(), "records": None})
        if kind == "report":
            return json_document("report", [obj.to_dict()])
        if kind == "reports":
            return json_document("report", [r.to_dict() for r in obj])
    raise InvalidInputError(f"unsupported format {fmt!r}")


def atomic_write(path, text: str) -> None:
    path = Path(path)
    tmp = None
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".part")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if tmp is not None and os.path.exists(tmp):
            os.unlink(tmp)
        raise OutputError(path, exc) from exc


def write_results(obj, path, format: str = "csv") -> None:
    """Persist records, a table, a summary or report(s) as CSV or JSON.

    The file is written to a temporary sibling and renamed into place, so a
    failure never leaves a partial file at ``path``.
    """
    atomic_write(path, render(obj, format))


# ---------------------------------------------------------------- streamed scans with resume markers


def _marker_path(path) -> Path:
    return Path(str(path) + ".resume")


def _summary_state(s: ScanSummary) -> dict:
    return {
        "total_even": s.total_even,
        "g_count": s.g_count,
        "non_g_n": s.non_g_n,
        "non_g_total": s.non_g_total,
        "prime_n_count": s.prime_n_count,
    }


def scan_to_file(
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    path,
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
    max_non_g: int = DEFAULT_MAX_NON_G,
    checkpoint: bool | None = None,
    resume: bool = False,
    backend: str | None = None,
) -> ScanSummary:
    """Stream a CSV record file for [n_lo, n_hi] and return the summary.

    With checkpointing (default once the range reaches n = 10^6), a JSON
    marker ``<path>.resume`` is rewritten after every chunk.  ``resume=True``
    recomputes the last completed chunk, checks it byte-for-byte against the
    file, truncates anything after it and continues.
    """
    _check_range(n_lo, n_hi, table)
    path = Path(path)
    marker = _marker_path(path)
    if checkpoint is None:
        checkpoint = n_hi >= CHECKPOINT_MIN_N
    start = time.perf_counter()
    summary = ScanSummary(n_lo, n_hi, max_non_g=max_non_g)
    next_n = n_lo
    offset = 0

    if resume and marker.exists():
        state = json.loads(marker.read_text(encoding="utf-8"))
        if (state["n_lo"], state["n_hi"], state["chunk_size"]) != (n_lo, n_hi, chunk_size):
            raise InvalidInputError(f"resume marker {marker} was written for different scan parameters")
        last_lo, last_hi = state["last_chunk"]
        redo = records_to_csv(records_of(evaluate_range(last_lo, last_hi, table, backend)), header=False)
        try:
            with open(path, "rb") as fh:
                fh.seek(state["last_chunk_offset"])
                on_disk = fh.read(state["offset"] - state["last_chunk_offset"])
        except OSError as exc:
            raise OutputError(path, exc) from exc
        digest = hashlib.sha256(redo.encode()).hexdigest()
        if on_disk != redo.encode() or digest != state["last_chunk_sha256"]:
            raise ConsistencyError(f"last completed chunk [{last_lo}, {last_hi}] in {path} does not revalidate")
        for k, v in state["summary"].items():
            setattr(summary, k, v)
        next_n = last_hi + 1
        offset = state["offset"]
        log.info("resuming %s at n=%d", path, next_n)

    try:
        if offset:
            fh = open(path, "r+", encoding="utf-8", newline="")
            fh.seek(offset)
            fh.truncate()
        else:
            fh = open(path, "w", encoding="utf-8", newline="")
            fh.write(",".join(RECORD_FIELDS) + "\n")
            offset = fh.tell()
    except OSError as exc:
        raise OutputError(path, exc) from exc

    try:
        with fh:
            if next_n <= n_hi:
                offset = _stream_chunks(fh, path, marker, summary, table, n_lo, n_hi, next_n, offset,
                                        chunk_size, workers, backend, checkpoint)
    except BaseException:
        # without a marker nothing flags the file as incomplete
        if not checkpoint and path.exists():
            path.unlink()
        raise
    if marker.exists():
        marker.unlink()
    summary.elapsed = time.perf_counter() - start
    return summary


def _stream_chunks(fh, path, marker, summary, table, n_lo, n_hi, next_n, offset,
                   chunk_size, workers, backend, checkpoint) -> int:
    for chunk in evaluate_chunks(next_n, n_hi, table, chunk_size, workers, backend):
        text = records_to_csv(records_of(chunk), header=False)
        try:
            fh.write(text)
            fh.flush()
        except OSError as exc:
            raise OutputError(path, exc) from exc
        summary.add_chunk(chunk, table)
        chunk_offset = offset
        offset += len(text.encode())
        if checkpoint:
            state = {
                "n_lo": n_lo,
                "n_hi": n_hi,
                "chunk_size": chunk_size,
                "last_chunk": [chunk.n_lo, chunk.n_hi],
                "last_chunk_offset": chunk_offset,
                "last_chunk_sha256": hashlib.sha256(text.encode()).hexdigest(),
                "offset": offset,
                "summary": _summary_state(summary),
            }
            atomic_write(marker, json.dumps(state) + "\n")
    return offset
