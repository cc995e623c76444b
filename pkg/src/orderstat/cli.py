"""Command-line front end.  Tables go to stdout as CSV (or to ``--out``).

Exit codes: 0 ok, 1 verification mismatch, 2 bad input, 3 nonexistent
moment, 4 numerical failure, 5 maximizer on the search boundary.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

from . import auction, mc_oracle, order_stats, shape
from .distributions import parse_distribution
from .errors import BoundaryMaximizer, DomainError, NonexistentMoment, NumericalFailure

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_MOMENT = 3
EXIT_NUMERICAL = 4
EXIT_BOUNDARY = 5

TABLE_COLUMNS = ["n", "mu", "first_diff", "second_diff"]
VERIFY_COLUMNS = ["n", "mu", "second_diff_direct", "second_diff_identity", "abs_err"]
OPTIMIZE_COLUMNS = ["n", "revenue", "cost", "g"]
RESERVE_COLUMNS = ["r", "n", "F_r", "revenue", "condition_ok", "reserve_j", "second_diff_I"]
SIMULATE_COLUMNS = ["estimate", "std_error", "trials", "seed", "quadrature_value", "sigma_distance"]


def fmt(value) -> str:
    """Render one CSV cell: 12 significant digits, empty for missing/NaN."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return ""
    return f"{value:.12g}"


def render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise AssertionError("ragged CSV row")
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def parse_n_range(text: str) -> tuple[int, int]:
    """``A..B`` inclusive, or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or A..B, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _emit(args, table: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(table)
    else:
        sys.stdout.write(table)


def _dist(args):
    spec = args.dist_flag or args.dist
    if not spec:
        raise DomainError("a distribution spec is required (positional or --dist)")
    return parse_distribution(spec)


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise DomainError(f"--{name.replace('_', '-')} is required for this command")
    return value


def cmd_table(args) -> int:
    dist = _dist(args)
    k = _need(args, "k")
    n_min, n_max = _need(args, "n")
    report = shape.sequence(dist, k, args.side, n_min, n_max)
    rows = []
    for i, n in enumerate(report.ns):
        first = report.first_diffs[i - 1] if i > 0 else None
        second = report.second_diffs[i - 1] if 0 < i < len(report.values) - 1 else None
        rows.append([n, report.values[i], first, second])
    _emit(args, render_csv(TABLE_COLUMNS, rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    dist = _dist(args)
    k = _need(args, "k")
    n_min, n_max = _need(args, "n")
    report = shape.sequence(dist, k, args.side, n_min, n_max)
    rows = []
    for i, n in enumerate(report.ns):
        if 0 < i < len(report.values) - 1:
            direct = report.second_diffs[i - 1]
            ident = shape.curvature_identity(dist, k, report.side, n)
            rows.append([n, report.values[i], direct, ident, abs(direct - ident)])
        else:
            rows.append([n, report.values[i], None, None, None])
    _emit(args, render_csv(VERIFY_COLUMNS, rows))
    pred = shape.predicted_shape(dist, k, report.side)
    ok = report.matches_claim()
    print(f"shape={report.curvature} violations={len(report.violations)}")
    print(
        f"expected={pred.curvature} hypothesis={pred.hypothesis} "
        f"guaranteed={'yes' if pred.applies else 'no'} match={'yes' if ok else 'no'}",
        file=sys.stderr,
    )
    return EXIT_OK if ok else EXIT_MISMATCH


def _optimize_rows(result: auction.AuctionResult, cost) -> list[list]:
    rows = []
    for n in range(2, len(result.g_values)):
        rows.append([n, result.revenues[n], cost(n), result.g_values[n]])
    return rows


def cmd_optimize(args) -> int:
    dist = _dist(args)
    cost = auction.parse_cost(_need(args, "cost"))
    try:
        if args.reserve is None:
            result = auction.optimize(dist, cost, args.n_max)
        else:
            result = auction.optimize_with_reserve(dist, cost, args.reserve, args.n_max)
    except BoundaryMaximizer as exc:
        if exc.result is not None:
            _emit(args, render_csv(OPTIMIZE_COLUMNS, _optimize_rows(exc.result, cost)))
        raise
    _emit(args, render_csv(OPTIMIZE_COLUMNS, _optimize_rows(result, cost)))
    print(
        f"n_star={result.n_star} tie_broken={fmt(result.tie_broken)} "
        f"shortcut={fmt(result.concavity_certified)}"
    )
    return EXIT_OK


def cmd_reserve(args) -> int:
    dist = _dist(args)
    r = _need(args, "reserve")
    n_lo, n_hi = _need(args, "n")
    if n_lo != n_hi:
        raise DomainError("reserve takes a single n")
    res = auction.reserve_analysis(dist, r, n_lo)
    row = [res.r, res.n, res.F_r, res.revenue, res.condition_ok, res.reserve_j, res.second_diff_I]
    _emit(args, render_csv(RESERVE_COLUMNS, [row]))
    return EXIT_OK


def cmd_simulate(args) -> int:
    dist = _dist(args)
    n_lo, n_hi = _need(args, "n")
    if n_lo != n_hi:
        raise DomainError("simulate takes a single n")
    n = n_lo
    cfg = mc_oracle.SimConfig(args.trials, args.seed, args.workers)
    if args.reserve is None:
        k = _need(args, "k")
        est = mc_oracle.sim_order_stat(dist, k, n, cfg)
        exact = order_stats.expected_order_stat(dist, k, n)
    else:
        est = mc_oracle.sim_reserve_revenue(dist, args.reserve, n, cfg)
        exact = auction.reserve_revenue(dist, args.reserve, n)
    if math.isfinite(est.std_error) and est.std_error > 0:
        sigma = abs(est.mean - exact) / est.std_error
    else:
        sigma = math.nan
    row = [est.mean, est.std_error, est.trials, args.seed, exact, sigma]
    _emit(args, render_csv(SIMULATE_COLUMNS, [row]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orderstat",
        description="Expected order statistics in the sample size, and bidder-count optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("dist", nargs="?", help="distribution spec, e.g. pareto:a=1,v=0.75")
    common.add_argument("--dist", dest="dist_flag", help="distribution spec (alternative to positional)")
    common.add_argument("--k", type=int, help="rank counted from the chosen side")
    common.add_argument("--side", default="bottom", choices=["bottom", "top"], type=str.lower)
    common.add_argument("--n", type=parse_n_range, help="sample size or inclusive range A..B")
    common.add_argument("--out", help="write the CSV table to this path instead of stdout")

    sub.add_parser("table", parents=[common], help="tabulate mu over n").set_defaults(func=cmd_table)
    sub.add_parser("verify", parents=[common], help="certify the shape of mu over n").set_defaults(
        func=cmd_verify
    )

    p = sub.add_parser("optimize", parents=[common], help="optimal number of bidders")
    p.add_argument("--cost", help="poly:c0,c1,... or table:v2,v3,...")
    p.add_argument("--n-max", type=int, default=auction.DEFAULT_N_MAX)
    p.add_argument("--reserve", type=float)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("reserve", parents=[common], help="reserve-price revenue and concavity diagnostics")
    p.add_argument("--reserve", type=float)
    p.set_defaults(func=cmd_reserve)

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo check of a quadrature value")
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reserve", type=float)
    p.add_argument("--workers", type=int, help="worker threads; does not change the result")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonexistentMoment as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MOMENT
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BoundaryMaximizer as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUNDARY


if __name__ == "__main__":
    sys.exit(main())
