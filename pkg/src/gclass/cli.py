"""Command-line interface: ``gclass {check,table,scan,verify,density}``.

Exit codes: 0 success / G number, 1 usage or input error, 2 not a G number,
3 I/O error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .errors import GClassError, InvalidInputError, TheoremViolationError
from .gcore import decompose, is_g_number
from .kernels import BACKEND, available_backends
from .primes import PrimeTable, build_prime_table
from .scan import (
    DEFAULT_CHUNK,
    DEFAULT_MAX_NON_G,
    OutputError,
    ScanSummary,
    atomic_write,
    json_document,
    p1_table,
    render,
    scan_range,
    scan_to_file,
)
from .verify import CLAIMS, DEFAULT_MAX_VIOLATIONS, run_claims

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_G = 2
EXIT_IO = 3
EXIT_VERIFY = 4

log = logging.getLogger("gclass")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _claims(text: str) -> list[str]:
    items = [c.strip().upper() for c in text.split(",") if c.strip()]
    bad = [c for c in items if c not in CLAIMS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"claims must be a comma list of {','.join(CLAIMS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write machine output to PATH instead of stdout")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--backend", choices=("cython", "python"), default=None,
                        help=f"range kernel (default: {BACKEND})")
    common.add_argument("-v", "--verbose", action="store_true")

    ranged = argparse.ArgumentParser(add_help=False)
    ranged.add_argument("--from", dest="n_lo", type=int, default=3, metavar="N", help="first n (default 3)")
    ranged.add_argument("--to", dest="n_hi", type=int, required=True, metavar="N", help="last n")
    ranged.add_argument("--workers", type=_positive, default=1, metavar="K")
    ranged.add_argument("--chunk", type=_positive, default=DEFAULT_CHUNK, metavar="SIZE")
    ranged.add_argument("--timing", action="store_true", help="include wall time in the summary")

    parser = _Parser(prog="gclass", description="G numbers and their two-prime decomposition.")
    parser.add_argument("--version", action="version", version=f"gclass {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="test whether an even number is a G number")
    p.add_argument("two_n", type=int, metavar="2N")

    p = sub.add_parser("table", parents=[common], help="show how p1 is obtained for n")
    p.add_argument("n", type=int)

    p = sub.add_parser("scan", parents=[common, ranged], help="evaluate every 2n for n in a range")
    p.add_argument("--max-non-g", type=_positive, default=DEFAULT_MAX_NON_G, metavar="M",
                   help="how many non-G n to list in the summary")
    p.add_argument("--resume", action="store_true", help="continue an interrupted --out CSV scan")
    p.add_argument("--checkpoint", action=argparse.BooleanOptionalAction, default=None,
                   help="write a resume marker after each chunk (default: when --to is 10^6 or more)")

    p = sub.add_parser("verify", parents=[common, ranged], help="check the lemmas and theorems over a range")
    p.add_argument("--claims", type=_claims, default=list(CLAIMS), metavar="LIST",
                   help=f"comma list from {','.join(CLAIMS)} (default: all)")
    p.add_argument("--seed", type=int, default=1, metavar="S", help="seed for the L1 sampler")
    p.add_argument("--samples", type=_positive, default=10_000, metavar="K")
    p.add_argument("--strict-lemma4", action="store_true",
                   help="count L4 failures at non-G numbers as violations")
    p.add_argument("--max-violations", type=_positive, default=DEFAULT_MAX_VIOLATIONS, metavar="M")

    sub.add_parser("density", parents=[common, ranged], help="fraction of 2n in range that are G numbers")
    return parser


def _table_for(n: int) -> PrimeTable:
    return build_prime_table(max(n, 2))


def _emit(args, text: str) -> None:
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _check_range(args) -> None:
    if args.n_lo < 3:
        raise UsageError(f"--from must be >= 3, got {args.n_lo}")
    if args.n_hi < args.n_lo:
        raise UsageError(f"--to ({args.n_hi}) must be >= --from ({args.n_lo})")


def cmd_check(args) -> int:
    two_n = args.two_n
    if two_n % 2 or two_n < 4:
        raise UsageError(f"expected an even number >= 4, got {two_n}")
    if two_n == 4:
        # n = 2 lies outside the definition (n > 2); reported as a fixed special case
        text = "4 = 2 + 2 (n = 2 is outside the G-number definition)\nnot a G number\n"
        if args.format == "json":
            text = json_document("check", {"record": None, "decomposition": [2, 2], "is_g": False})
        elif args.format == "csv":
            text = render([], "csv")
        _emit(args, text)
        return EXIT_NOT_G
    table = _table_for(two_n // 2)
    rec = is_g_number(two_n, table)
    dec = decompose(rec, table) if rec.is_g else None
    if args.format == "json":
        payload = {"record": rec.to_dict(), "decomposition": [dec.first, dec.second] if dec else None}
        _emit(args, json_document("check", payload))
    elif args.format == "csv":
        _emit(args, render([rec], "csv"))
    else:
        n = rec.n
        lines = [
            f"2n = {rec.two_n} (n = {n})",
            f"p1 = {rec.p1} (attained at p = {rec.witness_p})",
            f"g((n-1)^2, p1) = g({(n - 1) ** 2}, {rec.p1}) = {rec.g_value}",
            f"k1 = g / p1 = {rec.k1}",
            f"p1 * (2n - p1) = {rec.p1 * (rec.two_n - rec.p1)}",
        ]
        if dec:
            lines.append(f"G number: {dec}")
        else:
            lines.append(f"not a G number: p1 + k1 = {rec.p1 + rec.k1} != {rec.two_n}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if rec.is_g else EXIT_NOT_G


def cmd_table(args) -> int:
    if args.n < 3:
        raise UsageError(f"n must be >= 3, got {args.n}")
    table = _table_for(args.n)
    rows = p1_table(args.n, table)
    p1 = max(r.f_val for r in rows)
    if args.format in ("csv", "json"):
        _emit(args, render(rows, args.format))
        return EXIT_OK
    x = (args.n - 1) ** 2
    w_p = max(len("p"), len(str(rows[-1].p)))
    w_g = max(len(f"g({x},p)"), max(len(str(r.g_val)) for r in rows))
    w_f = max(len("f(g)"), len(str(p1)))
    out = [f"n = {args.n}, (n-1)^2 = {x}", f"  {'p':>{w_p}}  {f'g({x},p)':>{w_g}}  {'f(g)':>{w_f}}"]
    for r in rows:
        mark = "*" if r.f_val == p1 else " "
        out.append(f"{mark} {r.p:>{w_p}}  {r.g_val:>{w_g}}  {r.f_val:>{w_f}}")
    out.append(f"p1 = max f(g) = {p1}")
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def _summary_text(s: ScanSummary, timing: bool) -> str:
    odd = [n for n in s.non_g_n if n % 2]
    shown = len(s.non_g_n)
    lines = [
        f"n in [{s.n_lo}, {s.n_hi}]: {s.total_even} even numbers 2n",
        f"G numbers: {s.g_count}",
        f"G-density: {float(s.g_density):.3f} ({s.g_density})",
        f"prime n: {s.prime_n_count}",
        f"non-G n ({s.non_g_total}{'' if shown == s.non_g_total else f', first {shown} shown'}): "
        + ", ".join(map(str, s.non_g_n)),
        "odd non-G n: " + ", ".join(map(str, odd)),
    ]
    if timing and s.elapsed is not None:
        lines.append(f"elapsed: {s.elapsed:.3f} s")
    return "\n".join(lines) + "\n"


def cmd_scan(args) -> int:
    _check_range(args)
    table = _table_for(args.n_hi)
    kw = dict(workers=args.workers, max_non_g=args.max_non_g, backend=args.backend)
    if args.out and args.format == "csv":
        summary = scan_to_file(args.n_lo, args.n_hi, table, args.out, chunk_size=args.chunk,
                               checkpoint=args.checkpoint, resume=args.resume, **kw)
        sys.stdout.write(_summary_text(summary, args.timing))
        return EXIT_OK
    if args.resume:
        raise UsageError("--resume needs --out with --format csv")
    records = [] if args.format in ("csv", "json") else None
    summary = scan_range(args.n_lo, args.n_hi, table, args.chunk,
                         sink=records.append if records is not None else None, **kw)
    if args.format == "csv":
        _emit(args, render(records, "csv"))
    elif args.format == "json":
        payload = {"summary": summary.to_dict(include_elapsed=args.timing),
                   "records": [r.to_dict() for r in records]}
        _emit(args, json_document("scan", payload))
        if args.out:
            sys.stdout.write(_summary_text(summary, args.timing))
    else:
        _emit(args, _summary_text(summary, args.timing))
    return EXIT_OK


def cmd_verify(args) -> int:
    _check_range(args)
    table = _table_for(args.n_hi)
    reports = run_claims(
        args.claims, args.n_lo, args.n_hi, table,
        seed=args.seed, samples=args.samples, strict_lemma4=args.strict_lemma4,
        chunk_size=args.chunk, workers=args.workers, max_violations=args.max_violations,
    )
    if args.format in ("csv", "json"):
        _emit(args, render(reports, args.format))
    if args.format == "text" or args.out:
        text = "\n".join(r.summary_line() for r in reports) + "\n"
        if args.format == "text":
            _emit(args, text)
        else:
            sys.stdout.write(text)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        for n, detail in r.violations:
            print(f"{r.claim_id} counterexample n={n}: {detail}", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_density(args) -> int:
    _check_range(args)
    table = _table_for(args.n_hi)
    s = scan_range(args.n_lo, args.n_hi, table, args.chunk, workers=args.workers,
                   max_non_g=1, backend=args.backend)
    if args.format in ("csv", "json"):
        _emit(args, render(s, args.format))
    else:
        prime_density = s.prime_n_count / s.total_even
        text = (
            f"{float(s.g_density):.3f}\n"
            f"G-density over n in [{s.n_lo}, {s.n_hi}]: {s.g_count}/{s.total_even} = {s.g_density}\n"
            f"prime-n density: {s.prime_n_count}/{s.total_even} = {prime_density:.4f}\n"
        )
        if args.timing:
            text += f"elapsed: {s.elapsed:.3f} s\n"
        _emit(args, text)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "table": cmd_table,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "density": cmd_density,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.backend and args.backend not in available_backends():
        print(f"gclass: backend {args.backend!r} is not available", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gclass {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OutputError, OSError) as exc:
        print(f"gclass {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except TheoremViolationError as exc:
        print(f"gclass {args.command}: THEOREM VIOLATION: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InvalidInputError, GClassError) as exc:
        print(f"gclass {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
