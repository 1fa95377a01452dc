"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments, 3 resource limit, 4 internal
inconsistency (including disagreement between methods in ``verify``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Sequence

from . import engine, graph
from .bounds import bound_report
from .core import (
    InternalInconsistency,
    InvalidParameter,
    Limits,
    Params,
    ResourceLimitExceeded,
    UnsupportedFormat,
    make_params,
    multiset_size,
    subset_count,
)
from .enumerator import enum_ball
from .permanent import count_via_permanent

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_LIMIT = 3
EXIT_INCONSISTENT = 4

RECORD_FIELDS = ("lambda", "m", "d", "n", "value", "method", "wall_time_ms")


def _limits(args: argparse.Namespace) -> Limits:
    env = Limits.from_env()
    return Limits(
        state_width=env.state_width if args.state_width_limit is None else args.state_width_limit,
        memory_budget=env.memory_budget if args.memory_budget is None else args.memory_budget,
        permanent_order=env.permanent_order if args.permanent_limit is None else args.permanent_limit,
    )


def _record(params: Params, value: int, method: str, wall_time: float) -> dict:
    return {
        "lambda": params.lam,
        "m": params.m,
        "d": params.d,
        "n": params.n,
        "value": str(value),
        "method": method,
        "wall_time_ms": round(wall_time * 1000, 3),
    }


def _write_records(records: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        payload = records[0] if len(records) == 1 else records
        out.write(json.dumps(payload) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=RECORD_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        out.write(buf.getvalue())
    else:
        for rec in records:
            out.write(rec["value"] + "\n")


def cmd_size(args: argparse.Namespace) -> int:
    params = make_params(args.lam, args.m, args.d)
    result = engine.count(params, args.method, _limits(args))
    _write_records([_record(params, result.value, result.method, result.stats["wall_time"])],
                   args.format, sys.stdout)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    if args.m_max < 1:
        raise InvalidParameter(f"--m-max must be positive, got {args.m_max}")
    make_params(args.lam, 1, args.d)
    limits = _limits(args)
    records = []
    t0 = time.perf_counter()
    for m, value in engine.iterate_ball_sizes(args.lam, args.d, args.m_max, limits):
        now = time.perf_counter()
        records.append(_record(make_params(args.lam, m, args.d), value, "iterative", now - t0))
        t0 = now
    _write_records(records, args.format, sys.stdout)
    return EXIT_OK


def cmd_enum(args: argparse.Namespace) -> int:
    params = make_params(args.lam, args.m, args.d)
    out = sys.stdout

    def show(view) -> None:
        out.write(" ".join(map(str, view)) + "\n")

    count = enum_ball(params, show, budget=args.limit)
    out.write(f"count: {count}\n")
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    if args.view == "G" and args.m is None:
        raise InvalidParameter("--view G needs --m")
    m = args.m if args.view == "G" else None
    if m is not None:
        make_params(args.lam, m, args.d)
    else:
        make_params(args.lam, 1, args.d)
    text = graph.export_graph(args.lam, args.d, args.format, m=m, limits=_limits(args))
    sys.stdout.write(text)
    return EXIT_OK


def _verify_point(params: Params, limits: Limits, args: argparse.Namespace) -> dict[str, int | None]:
    arms: dict[str, int | None] = {}
    arms["iterative"] = engine.count_iterative(params, limits).value
    reference = arms["iterative"]
    n_states = subset_count(params.lam, params.d)
    if n_states <= args.max_matrix_order:
        arms["matrix-power"] = engine.count_matrix_power(params, limits).value
    else:
        arms["matrix-power"] = None
    if params.n <= min(args.max_permanent_order, limits.permanent_order):
        arms["permanent"] = count_via_permanent(params, limits)
    else:
        arms["permanent"] = None
    # enumeration cost is the ball size itself; any arm's value serves as the estimate
    if min(reference, multiset_size(params)) <= args.enum_budget:
        arms["enumeration"] = enum_ball(params, None, budget=args.enum_budget)
    else:
        arms["enumeration"] = None
    return arms


def cmd_verify(args: argparse.Namespace) -> int:
    limits = _limits(args)
    for name in ("lambda_max", "m_max"):
        if getattr(args, name) < 1:
            raise InvalidParameter(f"--{name.replace('_', '-')} must be positive")
    if args.d_max < 0:
        raise InvalidParameter("--d-max must be nonnegative")
    failures = 0
    points = 0
    for lam in range(1, args.lambda_max + 1):
        for d in range(0, args.d_max + 1):
            for m in range(1, args.m_max + 1):
                params = make_params(lam, m, d)
                arms = _verify_point(params, limits, args)
                values = {v for v in arms.values() if v is not None}
                ok = len(values) == 1
                points += 1
                failures += not ok
                shown = " ".join(
                    f"{k}={'skipped' if v is None else v}" for k, v in sorted(arms.items())
                )
                status = "ok" if ok else "MISMATCH"
                print(f"lambda={lam} m={m} d={d} n={params.n}: {shown} {status}")
    print(f"{points} points, {failures} mismatches")
    return EXIT_OK if failures == 0 else EXIT_INCONSISTENT


def cmd_bounds(args: argparse.Namespace) -> int:
    report = bound_report(args.lam, args.m, args.d_code, _limits(args))
    if args.format == "json":
        print(json.dumps(report.as_dict()))
    else:
        print(f"lambda={report.lam} m={report.m} n={report.n} d_code={report.d_code}")
        print(f"space_size: {report.space_size}")
        print(f"gv_lower: {report.gv_lower}  (ball radius {report.gv_radius}, size {report.gv_ball_size})")
        print(f"sp_upper: {report.sp_upper}  (ball radius {report.sp_radius}, size {report.sp_ball_size})")
        print(f"bounds: {report.kind}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    limits = argparse.ArgumentParser(add_help=False)
    group = limits.add_argument_group("resource limits (fallback: FPABALL_* environment variables)")
    group.add_argument("--state-width-limit", type=int, default=None)
    group.add_argument("--memory-budget", type=int, default=None, help="bytes")
    group.add_argument("--permanent-limit", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="fpaball", description="Chebyshev ball sizes of frequency permutations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("size", parents=[limits], help="ball size V_inf(lambda, lambda*m, d)")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--method", default="auto",
                   choices=["auto", "enum", "permanent", "matrix-power", "iterative"])
    p.add_argument("--format", default="plain", choices=["plain", "json", "csv"])
    p.set_defaults(func=cmd_size)

    p = sub.add_parser("table", parents=[limits], help="V_inf(lambda, lambda*i, d) for i = 1..m-max")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--format", default="csv", choices=["plain", "csv", "json"])
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("enum", parents=[limits], help="list the ball around the identity")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("graph", parents=[limits], help="export the transfer graph")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--view", default="H", choices=["H", "G"])
    p.add_argument("--format", default="dot")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("verify", parents=[limits], help="cross-check all methods on a grid")
    p.add_argument("--lambda-max", type=int, required=True)
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--enum-budget", type=int, default=200_000)
    p.add_argument("--max-permanent-order", type=int, default=16)
    p.add_argument("--max-matrix-order", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", parents=[limits], help="GV and sphere-packing bounds")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d-code", type=int, required=True)
    p.add_argument("--format", default="plain", choices=["plain", "json"])
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvalidParameter, UnsupportedFormat) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitExceeded as exc:
        sys.stdout.flush()
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InternalInconsistency as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
