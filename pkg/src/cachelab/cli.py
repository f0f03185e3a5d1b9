"""Command-line interface.

Subcommands: simulate (one policy over one trace), compare (every policy
plus the offline optimum on one trace), verify (lockstep replay with all
checkers), gen-trace (write a generated workload as a trace file).
Identical inputs and flags produce byte-identical output; the exit status
is nonzero when any asserted check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .analysis import ADAPT_UNIT
from .harness import (
    TraceParseError,
    emit_report,
    format_trace,
    parse_trace,
    run_simulation,
    verify_trace,
)
from .workloads import parse_workload

FORMAT_ENV_VAR = "CACHELAB_FORMAT"
POLICIES = ("lru", "clock", "arc", "car", "opt")


def _default_format():
    value = os.environ.get(FORMAT_ENV_VAR, "table").lower()
    return value if value in ("json", "csv", "table") else "table"


def _add_trace_args(sub):
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--trace", help="trace file of whitespace-separated tokens, or '-' for stdin")
    src.add_argument("--workload", help="generator spec, e.g. zipf:universe=100,alpha=0.8,length=1000,seed=42")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for --workload specs that omit seed= (default 0)")


def _load_trace(args):
    if args.workload is not None:
        spec = parse_workload(args.workload, default_seed=args.seed)
        return spec.generate(), "workload:%s" % spec.descriptor()
    if args.trace == "-":
        return parse_trace(sys.stdin.buffer.read()), "stdin"
    with open(args.trace, "rb") as handle:
        data = handle.read()
    return parse_trace(data), "file:%s" % args.trace


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cachelab",
        description="Trace-driven cache replacement laboratory with an "
                    "offline-optimal oracle and per-request bound checking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="run one policy over a trace")
    simulate.add_argument("--policy", required=True, choices=POLICIES)
    simulate.add_argument("--adaptation", choices=("unit", "ratio"), default=ADAPT_UNIT,
                          help="arc target adaptation rule (default unit)")
    simulate.add_argument("--cache-size", type=int, required=True, metavar="N")
    simulate.add_argument("--checks", default="",
                          help="comma list from: invariants,potential,lemmas")
    simulate.add_argument("--fail-on-car-step", action="store_true",
                          help="treat CAR per-step findings as hard failures")
    simulate.add_argument("--format", choices=("json", "csv", "table"), default=None)
    _add_trace_args(simulate)

    compare = sub.add_parser("compare", help="run all policies plus the optimum on one trace")
    compare.add_argument("--cache-size", type=int, required=True, metavar="N")
    compare.add_argument("--format", choices=("json", "csv", "table"), default=None)
    _add_trace_args(compare)

    verify = sub.add_parser("verify", help="lockstep replay with all checkers; emits JSON")
    verify.add_argument("--policy", required=True, choices=("lru", "clock", "arc", "car"))
    verify.add_argument("--adaptation", choices=("unit", "ratio"), default=ADAPT_UNIT)
    verify.add_argument("--cache-size", type=int, required=True, metavar="N")
    verify.add_argument("--fail-on-car-step", action="store_true")
    _add_trace_args(verify)

    gen = sub.add_parser("gen-trace", help="write a generated workload as trace text")
    gen.add_argument("--workload", required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="-", help="output file, '-' for stdout (default)")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen-trace":
            spec = parse_workload(args.workload, default_seed=args.seed)
            text = format_trace(spec.generate())
            if args.out == "-":
                sys.stdout.write(text)
            else:
                with open(args.out, "w", encoding="utf-8") as handle:
                    handle.write(text)
            return 0

        trace, label = _load_trace(args)

        if args.command == "simulate":
            checks = tuple(part for part in args.checks.split(",") if part)
            report = run_simulation(
                args.policy, args.cache_size, trace,
                adaptation=args.adaptation, checks=checks, trace_label=label,
                fail_on_car_step=args.fail_on_car_step,
            )
            fmt = args.format or _default_format()
            sys.stdout.write(emit_report(report, fmt))
            return 1 if report.hard_failure else 0

        if args.command == "compare":
            reports = []
            failed = False
            for policy, adaptation in (
                ("lru", None), ("clock", None), ("arc", "unit"),
                ("arc", "ratio"), ("car", None), ("opt", None),
            ):
                report = run_simulation(
                    policy, args.cache_size, trace,
                    adaptation=adaptation or ADAPT_UNIT, trace_label=label,
                )
                reports.append(report)
                failed = failed or report.hard_failure
            opt_misses = next(r.misses for r in reports if r.policy == "opt")
            for report in reports:
                if report.opt_misses is None:
                    report.opt_misses = opt_misses
                    if opt_misses:
                        report.miss_to_opt_ratio = Fraction(report.misses, opt_misses)
            fmt = args.format or _default_format()
            sys.stdout.write(emit_report(reports, fmt))
            return 1 if failed else 0

        if args.command == "verify":
            result, hard = verify_trace(
                args.policy, args.cache_size, trace,
                adaptation=args.adaptation, trace_label=label,
                fail_on_car_step=args.fail_on_car_step,
            )
            sys.stdout.write(json.dumps(result, indent=2, sort_keys=False) + "\n")
            return 1 if hard else 0

        parser.error("unknown command %r" % (args.command,))
    except (TraceParseError, ValueError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
