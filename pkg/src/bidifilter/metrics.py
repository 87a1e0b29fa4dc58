"""Per-simulation counters and the latency model derived from them.

Latency numerators are accumulated exactly (integer arithmetic whenever
the configured latencies are whole nanoseconds) and divided once at the
end, so results are reproducible to the last bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .policies import HIT_L1_VETERANS, HIT_L1_WINDOW, MISS, AccessOutcome


@dataclass(frozen=True)
class LatencyParams:
    """Access costs in nanoseconds: one per cache level, plus the miss cost."""

    level_ns: tuple[float, ...] = (100.0, 200_000.0)
    miss_ns: float = 2_000_000.0

    def __post_init__(self):
        object.__setattr__(self, "level_ns", tuple(self.level_ns))
        if not self.level_ns:
            raise ValueError("need at least one level latency")
        if any(t <= 0 for t in self.level_ns) or self.miss_ns <= 0:
            raise ValueError("latencies must be positive")


# DRAM-vs-flash style alternative where misses are cheap reads from the
# backing store but L2 writes still hurt.
FAST_MISS_LATENCY = LatencyParams(level_ns=(2.0, 200_000.0), miss_ns=100.0)


class SimStats:
    """Counters for one simulated trace replay."""

    __slots__ = ("n_levels", "requests", "misses", "h_l1_window", "h_l1_veterans",
                 "_h_deep", "_w_level")

    def __init__(self, n_levels: int):
        if n_levels < 1:
            raise ValueError("n_levels must be >= 1")
        self.n_levels = n_levels
        self.requests = 0
        self.misses = 0
        self.h_l1_window = 0
        self.h_l1_veterans = 0
        self._h_deep = [0] * (n_levels + 1)  # indexed by level, 0/1 unused
        self._w_level = [0] * (n_levels + 1)

    def add(self, outcome: AccessOutcome) -> None:
        self.requests += 1
        c = outcome.classification
        if c == MISS:
            self.misses += 1
        elif c == HIT_L1_WINDOW:
            self.h_l1_window += 1
        elif c == HIT_L1_VETERANS:
            self.h_l1_veterans += 1
        else:
            self._h_deep[int(c[5:])] += 1  # "hit_l<i>"
        for level, count in outcome.writes:
            self._w_level[level] += count

    def hits_at(self, level: int) -> int:
        if not 1 <= level <= self.n_levels:
            raise ValueError(f"no such level: {level}")
        if level == 1:
            return self.h_l1_window + self.h_l1_veterans
        return self._h_deep[level]

    def writes_at(self, level: int) -> int:
        if not 1 <= level <= self.n_levels:
            raise ValueError(f"no such level: {level}")
        return self._w_level[level]

    @property
    def total_hits(self) -> int:
        return self.h_l1_window + self.h_l1_veterans + sum(self._h_deep)

    def check(self) -> None:
        assert self.total_hits + self.misses == self.requests


def _exact(x: float):
    # keep whole-nanosecond latencies in int arithmetic for lossless sums
    xi = int(x)
    return xi if xi == x else x


def hit_ratio(stats: SimStats) -> float:
    if stats.requests == 0:
        raise ValueError("no requests recorded")
    return stats.total_hits / stats.requests


def avg_read_latency(stats: SimStats, params: LatencyParams) -> float:
    """Mean nanoseconds to serve a request, ignoring write traffic."""
    if stats.requests == 0:
        raise ValueError("no requests recorded")
    if len(params.level_ns) < stats.n_levels:
        raise ValueError("latency params cover fewer levels than the stats")
    num = _exact(params.miss_ns) * stats.misses
    for level in range(1, stats.n_levels + 1):
        num += _exact(params.level_ns[level - 1]) * stats.hits_at(level)
    return num / stats.requests


def avg_rw_latency(stats: SimStats, params: LatencyParams) -> float:
    """Mean nanoseconds per request including the writes each one caused."""
    if stats.requests == 0:
        raise ValueError("no requests recorded")
    if len(params.level_ns) < stats.n_levels:
        raise ValueError("latency params cover fewer levels than the stats")
    num = _exact(params.miss_ns) * stats.misses
    for level in range(1, stats.n_levels + 1):
        t = _exact(params.level_ns[level - 1])
        num += t * stats.hits_at(level) + t * stats.writes_at(level)
    return num / stats.requests
