"""Trace replay and parameter sweeps over policies and cache geometries.

A sweep makes two passes: the first counts distinct keys so capacities
can be expressed as fractions of the workload's footprint, the second
replays the trace once per (policy, geometry) cell.  Every cell gets its
own seed derived from the master seed and the cell index, so results are
reproducible row for row regardless of execution order or parallelism.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .metrics import LatencyParams, SimStats, avg_read_latency, avg_rw_latency, hit_ratio
from .policies import PolicySpec, make_policy
from .sketch import derive_seed
from .workload import SyntheticSpec, count_uniques, generate_synthetic, ingest_trace

_FILTERED_KINDS = ("BiDiFilter", "BiDiFilterUnited")

RESULT_FIELDS = (
    "trace_id", "policy_name", "l2_capacity", "l1_capacity",
    "window_fraction", "tie_break", "requests", "h_l1_window",
    "h_l1_veterans", "h_l2", "misses", "w_l1", "w_l2", "hit_ratio",
    "avg_read_latency_ns", "avg_rw_latency_ns", "rng_seed",
)


@dataclass(frozen=True)
class ResultRow:
    """One simulated cell, flattened for CSV/JSONL output.

    window_fraction and tie_break are None for policies they do not
    apply to (blank in CSV, null in JSONL).
    """

    trace_id: str
    policy_name: str
    l2_capacity: int
    l1_capacity: int
    window_fraction: float | None
    tie_break: str | None
    requests: int
    h_l1_window: int
    h_l1_veterans: int
    h_l2: int
    misses: int
    w_l1: int
    w_l2: int
    hit_ratio: float
    avg_read_latency_ns: float
    avg_rw_latency_ns: float
    rng_seed: int

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in RESULT_FIELDS}


def run_single(
    policy_spec: PolicySpec,
    trace: Iterable,
    latency: LatencyParams | None = None,
    trace_id: str = "",
    check_invariants: bool = False,
) -> ResultRow:
    """Replay one trace through one freshly built policy instance."""
    latency = latency or LatencyParams()
    policy = make_policy(policy_spec)
    stats = SimStats(policy.n_levels)
    for key in trace:
        stats.add(policy.handle(key))
        if check_invariants:
            policy.check_invariants()
    if stats.requests == 0:
        raise ValueError("trace is empty")
    stats.check()
    filtered = policy_spec.kind in _FILTERED_KINDS
    united = policy_spec.kind == "BiDiFilterUnited"
    return ResultRow(
        trace_id=trace_id,
        policy_name=policy_spec.kind,
        l2_capacity=policy_spec.level_capacities[1],
        l1_capacity=policy_spec.level_capacities[0],
        window_fraction=None if (not filtered or united) else policy_spec.window_fraction,
        tie_break=policy_spec.tie_break if filtered else None,
        requests=stats.requests,
        h_l1_window=stats.h_l1_window,
        h_l1_veterans=stats.h_l1_veterans,
        h_l2=stats.hits_at(2),
        misses=stats.misses,
        w_l1=stats.writes_at(1),
        w_l2=stats.writes_at(2),
        hit_ratio=hit_ratio(stats),
        avg_read_latency_ns=avg_read_latency(stats, latency),
        avg_rw_latency_ns=avg_rw_latency(stats, latency),
        rng_seed=policy_spec.rng_seed,
    )


@dataclass(frozen=True)
class SweepSpec:
    """A full experiment: one trace source crossed with geometries/policies.

    policies are PolicySpec templates; their level_capacities and
    rng_seed are replaced per cell.  l2_size_percents are fractions of
    the trace's distinct-key count; l1_ratios are L1:L2 size ratios.
    Levels beyond two (n_levels > 2) extend the hierarchy geometrically
    with the same ratio.
    """

    trace_source: SyntheticSpec | str | Path
    policies: tuple[PolicySpec, ...]
    l2_size_percents: tuple[float, ...]
    l1_ratios: tuple[float, ...]
    latency: LatencyParams = LatencyParams()
    master_seed: int = 0
    n_levels: int = 2

    def __post_init__(self):
        object.__setattr__(self, "policies", tuple(self.policies))
        object.__setattr__(self, "l2_size_percents", tuple(self.l2_size_percents))
        object.__setattr__(self, "l1_ratios", tuple(self.l1_ratios))
        if not self.policies:
            raise ValueError("need at least one policy")
        if not self.l2_size_percents or not self.l1_ratios:
            raise ValueError("need at least one geometry point")
        if any(not 0.0 < p <= 1.0 for p in self.l2_size_percents):
            raise ValueError("l2_size_percents must be in (0, 1]")
        if any(not 0.0 < r < 1.0 for r in self.l1_ratios):
            raise ValueError("l1_ratios must be in (0, 1)")
        if self.n_levels < 2:
            raise ValueError("n_levels must be >= 2")
        if len(self.latency.level_ns) < self.n_levels:
            raise ValueError("latency params cover fewer levels than the sweep")


def trace_label(source) -> str:
    if isinstance(source, SyntheticSpec):
        return (
            f"zipf-n{source.length}-g{source.ground_set}"
            f"-s{source.skew:g}-r{source.recency:g}-seed{source.rng_seed}"
        )
    return Path(source).name


def open_trace(source) -> Iterable:
    """Fresh key stream for a trace source; callable any number of times."""
    if isinstance(source, SyntheticSpec):
        return generate_synthetic(source)
    return ingest_trace(source)


def level_capacities_for(
    uniques: int, l2_percent: float, l1_ratio: float, n_levels: int = 2
) -> tuple[int, ...]:
    """Resolve a geometry point against the workload footprint.

    L2 is a fraction of the distinct-key count, L1 a fraction of L2;
    deeper levels keep growing by the inverse ratio.  Every capacity is
    clamped up to 1.
    """
    l2 = max(1, round(l2_percent * uniques))
    l1 = max(1, round(l1_ratio * l2))
    caps = [l1, l2]
    while len(caps) < n_levels:
        caps.append(max(1, round(caps[-1] / l1_ratio)))
    return tuple(caps)


def _run_cell(args) -> ResultRow:
    source, spec, latency, label = args
    return run_single(spec, open_trace(source), latency, trace_id=label)


def run_sweep(sweep: SweepSpec, jobs: int = 1) -> list[ResultRow]:
    """All cells of a sweep, in deterministic (policy, percent, ratio) order."""
    uniques, accesses = count_uniques(open_trace(sweep.trace_source))
    if accesses == 0:
        raise ValueError("trace is empty")
    label = trace_label(sweep.trace_source)
    cells = []
    index = 0
    for template in sweep.policies:
        for percent in sweep.l2_size_percents:
            for ratio in sweep.l1_ratios:
                caps = level_capacities_for(uniques, percent, ratio, sweep.n_levels)
                spec = replace(
                    template,
                    level_capacities=caps,
                    rng_seed=derive_seed(sweep.master_seed, index),
                )
                cells.append((sweep.trace_source, spec, sweep.latency, label))
                index += 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(cell) for cell in cells]


def write_rows_csv(rows: Sequence[ResultRow], fh) -> None:
    """CSV with the canonical header; None renders as an empty field."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(RESULT_FIELDS)
    for row in rows:
        writer.writerow(
            "" if value is None else value for value in row.as_dict().values()
        )


def write_rows_jsonl(rows: Sequence[ResultRow], fh) -> None:
    """One JSON object per line, same field order as the CSV header."""
    for row in rows:
        fh.write(json.dumps(row.as_dict()))
        fh.write("\n")


def write_rows(rows: Sequence[ResultRow], path, fmt: str = "csv") -> None:
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown format: {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            write_rows_csv(rows, fh)
        else:
            write_rows_jsonl(rows, fh)
