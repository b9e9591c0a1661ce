"""Command-line interface.

Report rows are written as JSON objects one per line (``--out json``) or as
CSV with a header row (``--out csv``). Probabilities are printed with 12
significant digits; log-space quantities get a ``log10`` column so values
below double range stay readable.

Exit codes: 0 success, 1 usage error, 2 invalid input data, 3 search
exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Iterable, Sequence

from . import bounds, exact_count, sampling
from .spread import PermutationError, read_permutation, spread_with_witness, write_permutation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EXHAUSTED = 3

FIG2_COLUMNS = ["N", "exact_prob_gt2", "bound_tight_s3", "log10_bound_tight_s3"]
FIG3_COLUMNS = ["N", "s", "bound_tight", "log10_bound_tight", "above_s_max"]
FIG4_COLUMNS = ["N", "s", "bound_tight", "log10_bound_tight", "above_s_max"]


class DataError(Exception):
    """Invalid input data; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt_prob(x: float) -> str:
    return format(x, ".12g")


def fmt_log10(x: float) -> str:
    return "-inf" if x == -math.inf else format(x, ".12g")


def fmt_fraction(q: Fraction | None) -> str:
    return "" if q is None else f"{q.numerator}/{q.denominator}"


def parse_seed(text: str) -> int:
    """Decimal or ``0x``-prefixed hexadecimal 64-bit seed."""
    t = text.strip().lower()
    try:
        value = int(t[2:], 16) if t.startswith("0x") else int(t, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value <= sampling.SEED_MAX:
        raise argparse.ArgumentTypeError(f"seed {text} is not a 64-bit unsigned integer")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def emit(rows: Iterable[dict], schema: str, out: str, stream, columns: Sequence[str] | None = None) -> None:
    rows = list(rows)
    if out == "json":
        for row in rows:
            stream.write(json.dumps({"schema": schema, **row}) + "\n")
        return
    if columns is None:
        columns = list(rows[0]) if rows else []
    writer = csv.DictWriter(stream, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


# -- row builders ----------------------------------------------------------

def spread_row(path: str, witness: bool) -> dict:
    p = read_permutation(path)
    value, pair = spread_with_witness(p)
    row = {"n": p.n, "spread": value}
    if witness:
        row["witness_i"], row["witness_j"] = pair
    return row


def count_row(n: int) -> dict:
    m0 = exact_count.m0_n2(n)
    nf = exact_count.factorial(n)
    return {"n": n, "factorial": nf, "m0": m0, "k2": nf - m0}


def prob_row(n: int) -> dict:
    p = exact_count.exact_prob_gt2(n)
    return {
        "n": n,
        "prob_gt2": fmt_prob(p.float_view),
        "log10_prob_gt2": fmt_log10(p.log_view / math.log(10)),
        "exact": str(p),
        "limit": fmt_prob(exact_count.limit_prob_gt2()),
    }


def bound_row(n: int, s: int, kind: str) -> dict:
    if kind == "asymptotic":
        b = bounds.asymptotic_bound(s)
        return {
            "n": "", "s": s, "kind": kind,
            "bound": fmt_prob(b.value), "log10_bound": fmt_log10(b.log10),
            "exact": "", "log10_count_bound": "", "above_s_max": 0,
        }
    b = bounds.bound_basic(n, s) if kind == "basic" else bounds.bound_tight(n, s)
    count = ""
    if kind == "tight":
        count = fmt_log10(bounds.count_lower_bound(n, s).log10)
    return {
        "n": n, "s": s, "kind": kind,
        "bound": fmt_prob(b.value), "log10_bound": fmt_log10(b.log10),
        "exact": fmt_fraction(b.value_rational), "log10_count_bound": count,
        "above_s_max": int(b.above_s_max),
    }


def fig2_rows(ns: Iterable[int]) -> Iterable[dict]:
    for n in ns:
        b = bounds.bound_tight(n, 3)
        yield {
            "N": n,
            "exact_prob_gt2": fmt_prob(exact_count.exact_prob_gt2(n).float_view),
            "bound_tight_s3": fmt_prob(b.value),
            "log10_bound_tight_s3": fmt_log10(b.log10),
        }


def bound_table_rows(ns: Iterable[int], ss: Sequence[int]) -> Iterable[dict]:
    for n in ns:
        for s in ss:
            b = bounds.bound_tight(n, s)
            yield {
                "N": n, "s": s,
                "bound_tight": fmt_prob(b.value),
                "log10_bound_tight": fmt_log10(b.log10),
                "above_s_max": int(b.above_s_max),
            }


def sample_rows(n: int, trials: int, seed: int, s: int | None, threads: int, block_size: int) -> list[dict]:
    hist = sampling.empirical_distribution(n, trials, seed, threads=threads, block_size=block_size)
    targets = [s] if s is not None else list(range(2, bounds.s_max(n) + 1))
    rows = []
    for t in targets:
        hits = sum(c for k, c in hist.items() if k >= t)
        r = sampling.SampleReport.from_counts(n, t, trials, hits, seed)
        rows.append({
            "n": n, "s": t, "trials": trials, "hits": hits,
            "exactly": hist.get(t, 0),
            "estimate": fmt_prob(r.estimate),
            "ci_low": fmt_prob(r.ci_low), "ci_high": fmt_prob(r.ci_high),
            "seed": seed,
        })
    return rows


# -- commands --------------------------------------------------------------

def cmd_spread(args, out) -> int:
    try:
        row = spread_row(args.file, args.witness)
    except OSError as exc:
        raise DataError(f"cannot read {args.file}: {exc.strerror or exc}") from None
    except PermutationError as exc:
        raise DataError(f"{args.file}: {exc}") from None
    emit([row], "spread_row", args.out, out)
    return EXIT_OK


def cmd_count(args, out) -> int:
    emit([count_row(args.n)], "count_row", args.out, out)
    return EXIT_OK


def cmd_prob(args, out) -> int:
    emit([prob_row(args.n)], "prob_row", args.out, out)
    return EXIT_OK


def cmd_bound(args, out) -> int:
    if args.kind != "asymptotic" and args.n is None:
        raise DataError("--n is required unless --kind asymptotic")
    row = bound_row(args.n, args.s, args.kind)
    if row["above_s_max"]:
        print(f"note: s={args.s} exceeds the maximum spread {bounds.s_max(args.n)} "
              f"for n={args.n}; no such interleaver exists", file=sys.stderr)
    emit([row], "bound_row", args.out, out)
    return EXIT_OK


def cmd_table(args, out) -> int:
    if args.figure == "fig2":
        ns = range(args.n_min or 5, (args.n_max or 300) + 1, args.n_step or 1)
        emit(fig2_rows(ns), "prob_row", args.out, out, FIG2_COLUMNS)
    elif args.figure == "fig3":
        ns = range(args.n_min or 8, (args.n_max or 4096) + 1, args.n_step or 8)
        emit(bound_table_rows(ns, args.s or [3, 4, 5, 6]), "bound_row", args.out, out, FIG3_COLUMNS)
    else:
        ns = args.n_list or [256, 1024, 4096]
        emit(bound_table_rows(ns, args.s or list(range(2, 11))), "bound_row", args.out, out, FIG4_COLUMNS)
    return EXIT_OK


def cmd_sample(args, out) -> int:
    rows = sample_rows(args.n, args.trials, args.seed, args.s, args.threads, args.block_size)
    emit(rows, "sample_row", args.out, out)
    return EXIT_OK


def cmd_search(args, out) -> int:
    if args.s > bounds.s_max(args.n):
        raise DataError(f"no interleaver of blocklength {args.n} has spread {args.s} "
                        f"(max {bounds.s_max(args.n)})")
    res = sampling.search_spread(args.n, args.s, args.seed, args.max_attempts)
    row = {
        "n": args.n, "s": args.s, "found": int(res.found is not None),
        "attempts": res.attempts, "seed": args.seed, "spread": "",
    }
    if res.found is not None:
        value, _ = spread_with_witness(res.found)
        row["spread"] = value
        if args.output:
            write_permutation(res.found, args.output,
                              header=f"n={args.n} spread={value} seed={args.seed} attempts={res.attempts}")
    emit([row], "search_row", args.out, out)
    return EXIT_OK if res.found is not None else EXIT_EXHAUSTED


def cmd_oracle(args, out) -> int:
    try:
        dist = exact_count.oracle_distribution(args.n, allow_large=args.allow_large, threads=args.threads)
    except exact_count.OracleCapError as exc:
        raise DataError(str(exc)) from None
    rows = [{"n": dist.n, "s": s, "count": c} for s, c in dist.counts.items()]
    emit(rows, "oracle_row", args.out, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ilspread", description="Spread of random interleavers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, out="json"):
        p = sub.add_parser(name, help=help)
        p.add_argument("--out", choices=["csv", "json"], default=out)
        p.set_defaults(func=func)
        return p

    p = add("spread", cmd_spread, "spread of a permutation file")
    p.add_argument("file")
    p.add_argument("--witness", action="store_true", help="also print a pair attaining the spread")

    p = add("count", cmd_count, "exact N!, M0(N,2) and K2(N)")
    p.add_argument("--n", type=int, required=True)

    p = add("prob", cmd_prob, "exact probability of spread > 2")
    p.add_argument("--n", type=int, required=True)

    p = add("bound", cmd_bound, "lower bound on P(spread >= s)")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--kind", choices=["basic", "tight", "asymptotic"], default="tight")

    p = add("table", cmd_table, "figure data tables", out="csv")
    p.add_argument("figure", choices=["fig2", "fig3", "fig4"])
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--n-step", type=_positive)
    p.add_argument("--n-list", type=_int_list, help="blocklengths for fig4, e.g. 256,1024,4096")
    p.add_argument("--s", type=_int_list, help="spread targets, e.g. 3,4,5")

    p = add("sample", cmd_sample, "Monte Carlo spread distribution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=parse_seed, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--block-size", type=_positive, default=sampling.DEFAULT_BLOCK_SIZE)

    p = add("search", cmd_search, "rejection search for spread >= s")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--seed", type=parse_seed, required=True)
    p.add_argument("--max-attempts", type=_positive, default=10**6)
    p.add_argument("--output", "-o", help="write the found permutation here")

    p = add("oracle", cmd_oracle, "exhaustive spread distribution (small N)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--allow-large", action="store_true",
                   help=f"raise the cap from {exact_count.ORACLE_DEFAULT_CAP} to {exact_count.ORACLE_HARD_CAP}")
    p.add_argument("--threads", type=_positive, default=1)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = stdout if stdout is not None else sys.stdout
    n = getattr(args, "n", None)
    if n is not None and n < 2:
        parser.error(f"--n must be at least 2, got {n}")
    s = getattr(args, "s", None)
    if isinstance(s, int) and s < 2:
        parser.error(f"--s must be at least 2, got {s}")
    try:
        return args.func(args, out)
    except DataError as exc:
        print(f"ilspread: error: {exc}", file=sys.stderr)
        return EXIT_DATA


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout; used by the tests."""
    buf = io.StringIO()
    try:
        code = main(argv, stdout=buf)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
