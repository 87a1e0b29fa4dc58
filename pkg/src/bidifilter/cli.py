"""Command line front end: simulate one cell or sweep a grid."""

from __future__ import annotations

import argparse
import sys

from .harness import (
    SweepSpec,
    level_capacities_for,
    open_trace,
    run_single,
    run_sweep,
    trace_label,
    write_rows,
    write_rows_csv,
    write_rows_jsonl,
)
from .metrics import LatencyParams
from .policies import KINDS, PolicySpec
from .sketch import derive_seed
from .workload import SyntheticSpec, count_uniques


def _parse_synthetic(text: str, seed: int) -> SyntheticSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise ValueError(
            "--synthetic wants length:ground_set:skew:recency, "
            f"got {text!r}"
        )
    return SyntheticSpec(
        length=int(parts[0]),
        ground_set=int(parts[1]),
        skew=float(parts[2]),
        recency=float(parts[3]),
        rng_seed=seed,
    )


def _parse_latency(text: str) -> LatencyParams:
    values = [float(v) for v in text.split(",")]
    if len(values) < 2:
        raise ValueError("--latency wants at least t_l1,...,t_miss")
    return LatencyParams(level_ns=tuple(values[:-1]), miss_ns=values[-1])


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _add_common(sub: argparse.ArgumentParser, multi_policy: bool) -> None:
    if multi_policy:
        sub.add_argument(
            "--policy", default="BiDiFilter",
            help=f"comma separated policy names from {', '.join(KINDS)}",
        )
        sub.add_argument(
            "--l2-pct", default="0.1,0.5,1.0",
            help="comma separated L2 sizes as fractions of distinct keys",
        )
        sub.add_argument(
            "--l1-ratio", default="0.1",
            help="comma separated L1:L2 size ratios",
        )
    else:
        sub.add_argument(
            "--policy", default="BiDiFilter", choices=KINDS,
            help="policy to simulate",
        )
        sub.add_argument(
            "--l2-pct", type=float, default=0.5,
            help="L2 size as a fraction of distinct keys",
        )
        sub.add_argument(
            "--l1-ratio", type=float, default=0.1,
            help="L1 size as a fraction of L2",
        )
    sub.add_argument("--window", type=float, default=0.5,
                     help="fraction of L1 given to the window space")
    sub.add_argument("--tie", choices=("admit", "reject"), default="admit",
                     help="filter behavior on equal frequency estimates")
    sub.add_argument("--promote-p", type=float, default=0.5,
                     help="Promote: probability an L2 hit moves up")
    sub.add_argument("--promote-q", type=float, default=0.5,
                     help="Promote: probability a demoted victim is written")
    sub.add_argument("--levels", type=int, default=2,
                     help="number of cache levels")
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--synthetic", metavar="LEN:GROUND:SKEW:RECENCY",
                     help="generate a synthetic trace")
    src.add_argument("--trace", metavar="PATH",
                     help="replay a trace file (key[,size_bytes] per line)")
    sub.add_argument("--latency", metavar="T_L1,...,T_MISS", default=None,
                     help="per-level access costs plus miss cost, in ns")
    sub.add_argument("--seed", type=int, default=0,
                     help="master seed for all randomness")
    sub.add_argument("--out", default="-",
                     help="output path, or - for stdout")
    sub.add_argument("--format", choices=("csv", "jsonl"), default="csv",
                     help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bidifilter",
        description="Simulate multilevel cache policies over a key trace.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    run_p = subs.add_parser("run", help="simulate a single policy and geometry")
    _add_common(run_p, multi_policy=False)
    sweep_p = subs.add_parser("sweep", help="cross policies with geometries")
    _add_common(sweep_p, multi_policy=True)
    sweep_p.add_argument("--jobs", type=int, default=1,
                         help="worker processes for independent cells")
    return parser


def _template(kind: str, args) -> PolicySpec:
    return PolicySpec(
        kind=kind,
        level_capacities=(1, 1),  # replaced per cell
        window_fraction=args.window,
        tie_break=args.tie,
        promote_prob=args.promote_p,
        demote_prob=args.promote_q,
    )


def _trace_source(args):
    if args.synthetic is not None:
        return _parse_synthetic(args.synthetic, args.seed)
    return args.trace


def _emit(rows, args) -> None:
    if args.out == "-":
        if args.format == "csv":
            write_rows_csv(rows, sys.stdout)
        else:
            write_rows_jsonl(rows, sys.stdout)
    else:
        write_rows(rows, args.out, args.format)


def _cmd_run(args) -> int:
    source = _trace_source(args)
    latency = _parse_latency(args.latency) if args.latency else LatencyParams()
    uniques, accesses = count_uniques(open_trace(source))
    if accesses == 0:
        raise ValueError("trace is empty")
    caps = level_capacities_for(uniques, args.l2_pct, args.l1_ratio, args.levels)
    spec = PolicySpec(
        kind=args.policy,
        level_capacities=caps,
        window_fraction=args.window,
        tie_break=args.tie,
        promote_prob=args.promote_p,
        demote_prob=args.promote_q,
        rng_seed=derive_seed(args.seed, 0),
    )
    row = run_single(spec, open_trace(source), latency, trace_id=trace_label(source))
    _emit([row], args)
    return 0


def _cmd_sweep(args) -> int:
    source = _trace_source(args)
    latency = _parse_latency(args.latency) if args.latency else LatencyParams()
    kinds = tuple(k.strip() for k in args.policy.split(","))
    for kind in kinds:
        if kind not in KINDS:
            raise ValueError(f"unknown policy: {kind!r}")
    sweep = SweepSpec(
        trace_source=source,
        policies=tuple(_template(kind, args) for kind in kinds),
        l2_size_percents=_parse_floats(args.l2_pct),
        l1_ratios=_parse_floats(args.l1_ratio),
        latency=latency,
        master_seed=args.seed,
        n_levels=args.levels,
    )
    rows = run_sweep(sweep, jobs=args.jobs)
    _emit(rows, args)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_sweep(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
