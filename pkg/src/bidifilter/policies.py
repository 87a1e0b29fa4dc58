"""Multilevel cache policies with frequency-filtered traffic between levels.

The headline scheme splits L1 into a Window (newcomers, plain LRU) and a
Veterans space (established items, plain LRU), with an SLRU-managed L2
below.  A shared frequency sketch filters traffic in both directions:

* downward, a candidate demoted out of L1 enters a full L2 only if its
  estimated frequency beats L2's eviction candidate;
* upward, an L2 hit is promoted into a full Veterans space only if it
  beats the Veterans eviction candidate, which then takes its slot in L2.

Every request is recorded in the sketch before any decision is made.
The cache is exclusive: a key lives in at most one space at a time.

Writes are accounted per level: an insert into a level coming from
outside that level costs one write; recency updates within a level are
free.  ``AccessOutcome`` carries the request classification plus the
writes it caused, so a simulation can price traffic exactly.

Baselines: ``Demote`` (one global LRU order chained across levels),
``NaiveLRU`` (independent levels, hits never move items up) and
``Promote`` (coin-flip promotion/demotion, bridging the two).  Policies
with a single undivided L1 report L1 hits in the window bucket.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

from .sketch import FrequencySketch, SketchConfig, mix64
from .spaces import LruSpace, SlruSpace

MISS = "miss"
HIT_L1_WINDOW = "hit_l1_window"
HIT_L1_VETERANS = "hit_l1_veterans"

KINDS = ("BiDiFilter", "BiDiFilterUnited", "Demote", "NaiveLRU", "Promote")

_SKETCH_SALT = 0xB1D1F117E2


def hit_at_level(level: int) -> str:
    """Classification label for a hit found at the given level (>= 2)."""
    return f"hit_l{level}"


HIT_L2 = hit_at_level(2)


class AccessOutcome(NamedTuple):
    """What one request did: its classification and the writes it caused."""

    classification: str
    writes: tuple[tuple[int, int], ...] = ()


_HIT_WINDOW = AccessOutcome(HIT_L1_WINDOW)
_HIT_VETERANS = AccessOutcome(HIT_L1_VETERANS)


@dataclass(frozen=True)
class PolicySpec:
    """Declarative description of a policy instance.

    window_fraction and tie_break only apply to the filtered kinds;
    promote_prob/demote_prob only to Promote.  rng_seed feeds the sketch
    hash seed and Promote's coin flips.
    """

    kind: str
    level_capacities: tuple[int, ...]
    window_fraction: float = 0.5
    tie_break: str = "admit"
    promote_prob: float = 0.5
    demote_prob: float = 0.5
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown policy kind: {self.kind!r}")
        caps = tuple(self.level_capacities)
        object.__setattr__(self, "level_capacities", caps)
        if len(caps) < 2:
            raise ValueError("need at least two cache levels")
        if any(c < 1 for c in caps):
            raise ValueError("every level capacity must be >= 1")
        if not 0.0 <= self.window_fraction <= 1.0:
            raise ValueError("window_fraction must be in [0, 1]")
        if self.tie_break not in ("admit", "reject"):
            raise ValueError("tie_break must be 'admit' or 'reject'")
        if not 0.0 <= self.promote_prob <= 1.0:
            raise ValueError("promote_prob must be in [0, 1]")
        if not 0.0 <= self.demote_prob <= 1.0:
            raise ValueError("demote_prob must be in [0, 1]")

    @property
    def n_levels(self) -> int:
        return len(self.level_capacities)


def default_sketch(level_capacities, rng_seed: int) -> FrequencySketch:
    total = sum(level_capacities)
    return FrequencySketch(
        SketchConfig.for_capacity(total), seed=mix64(rng_seed ^ _SKETCH_SALT)
    )


def make_policy(spec: PolicySpec):
    """Build a policy object from its spec."""
    caps = spec.level_capacities
    if spec.kind == "BiDiFilter":
        if len(caps) == 2:
            return BiDiFilter(
                caps,
                window_fraction=spec.window_fraction,
                tie_break=spec.tie_break,
                rng_seed=spec.rng_seed,
            )
        return CascadeFilter(
            caps,
            window_fraction=spec.window_fraction,
            tie_break=spec.tie_break,
            rng_seed=spec.rng_seed,
        )
    if spec.kind == "BiDiFilterUnited":
        if len(caps) != 2:
            raise ValueError("BiDiFilterUnited supports exactly two levels")
        return BiDiFilterUnited(
            caps, tie_break=spec.tie_break, rng_seed=spec.rng_seed
        )
    if spec.kind == "Demote":
        return Demote(caps)
    if spec.kind == "NaiveLRU":
        return NaiveLRU(caps)
    if spec.kind == "Promote":
        return Promote(
            caps,
            promote_prob=spec.promote_prob,
            demote_prob=spec.demote_prob,
            rng_seed=spec.rng_seed,
        )
    raise ValueError(f"unknown policy kind: {spec.kind!r}")


class _FilteredMixin:
    """Shared admission-filter plumbing for the sketch-based policies."""

    sketch: FrequencySketch
    tie_break: str
    decision_log: list | None

    def _init_filter(self, level_capacities, tie_break, rng_seed, sketch):
        if tie_break not in ("admit", "reject"):
            raise ValueError("tie_break must be 'admit' or 'reject'")
        self.tie_break = tie_break
        self._strict = tie_break == "reject"
        self.sketch = sketch or default_sketch(level_capacities, rng_seed)
        # when set to a list, every filter evaluation is appended as
        # (candidate, victim, candidate_est, victim_est, admitted)
        self.decision_log = None

    def _wins(self, candidate, victim) -> bool:
        ce = self.sketch.estimate(candidate)
        ve = self.sketch.estimate(victim)
        admitted = ce > ve if self._strict else ce >= ve
        if self.decision_log is not None:
            self.decision_log.append((candidate, victim, ce, ve, admitted))
        return admitted


def _split_l1(l1_capacity: int, window_fraction: float) -> tuple[int, int]:
    window = round(window_fraction * l1_capacity)
    return window, l1_capacity - window


class BiDiFilter(_FilteredMixin):
    """Two-level Window/Veterans scheme with bidirectional filtering."""

    name = "BiDiFilter"

    def __init__(
        self,
        level_capacities,
        *,
        window_fraction: float = 0.5,
        tie_break: str = "admit",
        rng_seed: int = 0,
        sketch: FrequencySketch | None = None,
    ):
        l1, l2 = level_capacities
        if l1 < 1 or l2 < 1:
            raise ValueError("level capacities must be >= 1")
        if not 0.0 <= window_fraction <= 1.0:
            raise ValueError("window_fraction must be in [0, 1]")
        wcap, vcap = _split_l1(l1, window_fraction)
        self.window_fraction = window_fraction
        self.window = LruSpace(wcap)
        self.veterans = LruSpace(vcap)
        self.l2 = SlruSpace(l2)
        self.n_levels = 2
        self._init_filter(level_capacities, tie_break, rng_seed, sketch)
        # membership reads bypass the space wrappers in the hot loop
        self._win_od = self.window._od
        self._vet_od = self.veterans._od
        self._l2_prob = self.l2._probation
        self._l2_prot = self.l2._protected

    def handle(self, key) -> AccessOutcome:
        self.sketch.record(key)
        if key in self._win_od:
            self._win_od.move_to_end(key)
            return _HIT_WINDOW
        if key in self._vet_od:
            self._vet_od.move_to_end(key)
            return _HIT_VETERANS
        if key in self._l2_prob or key in self._l2_prot:
            return self._on_l2_hit(key)
        return self._on_miss(key)

    def _on_miss(self, key) -> AccessOutcome:
        writes = []
        if self.window.capacity > 0:
            candidate = None
            if len(self.window) >= self.window.capacity:
                candidate = self.window.peek_victim()
                self.window.remove(candidate)
            self.window.insert(key)
            writes.append((1, 1))
            if candidate is not None:
                self._admit_to_l2(candidate, writes)
        else:
            # no window: the missed key itself competes for Veterans
            if len(self.veterans) < self.veterans.capacity:
                self.veterans.insert(key)
                writes.append((1, 1))
            else:
                victim = self.veterans.peek_victim()
                if self._wins(key, victim):
                    self.veterans.remove(victim)
                    self.veterans.insert(key)
                    writes.append((1, 1))
                    # displaced veteran demotes without a filter check
                    if len(self.l2) >= self.l2.capacity:
                        self.l2.remove(self.l2.peek_victim())
                    self.l2.insert(victim)
                    writes.append((2, 1))
                else:
                    self._admit_to_l2(key, writes)
        return AccessOutcome(MISS, tuple(writes))

    def _admit_to_l2(self, candidate, writes) -> None:
        if len(self.l2) < self.l2.capacity:
            self.l2.insert(candidate)
            writes.append((2, 1))
            return
        victim = self.l2.peek_victim()
        if self._wins(candidate, victim):
            self.l2.remove(victim)
            self.l2.insert(candidate)
            writes.append((2, 1))
        # losing candidates leave the cache entirely

    def _on_l2_hit(self, key) -> AccessOutcome:
        target = self.veterans if self.veterans.capacity > 0 else self.window
        writes = []
        if len(target) < target.capacity:
            self.l2.remove(key)
            target.insert(key)
            writes.append((1, 1))
        else:
            victim = target.peek_victim()
            if self._wins(key, victim):
                self.l2.remove(key)
                target.remove(victim)
                target.insert(key)
                writes.append((1, 1))
                # the hit freed an L2 slot, so the displaced L1 victim
                # lands there without anyone being evicted
                self.l2.insert(victim)
                writes.append((2, 1))
            else:
                self.l2.touch(key)
        return AccessOutcome(HIT_L2, tuple(writes))

    def check_invariants(self) -> None:
        self.window.check()
        self.veterans.check()
        self.l2.check()
        spaces = (self.window, self.veterans, self.l2)
        union = set()
        total = 0
        for sp in spaces:
            union.update(sp.keys())
            total += len(sp)
        assert len(union) == total, "a key occupies more than one space"


class BiDiFilterUnited(_FilteredMixin):
    """Variant with an undivided LRU L1; filtering still guards both moves."""

    name = "BiDiFilterUnited"

    def __init__(
        self,
        level_capacities,
        *,
        tie_break: str = "admit",
        rng_seed: int = 0,
        sketch: FrequencySketch | None = None,
    ):
        l1, l2 = level_capacities
        if l1 < 1 or l2 < 1:
            raise ValueError("level capacities must be >= 1")
        self.l1 = LruSpace(l1)
        self.l2 = SlruSpace(l2)
        self.n_levels = 2
        self._init_filter(level_capacities, tie_break, rng_seed, sketch)

    def handle(self, key) -> AccessOutcome:
        self.sketch.record(key)
        if key in self.l1:
            self.l1.touch(key)
            return _HIT_WINDOW
        if key in self.l2:
            return self._on_l2_hit(key)
        writes = []
        candidate = None
        if len(self.l1) >= self.l1.capacity:
            candidate = self.l1.peek_victim()
            self.l1.remove(candidate)
        self.l1.insert(key)
        writes.append((1, 1))
        if candidate is not None:
            self._admit_to_l2(candidate, writes)
        return AccessOutcome(MISS, tuple(writes))

    def _admit_to_l2(self, candidate, writes) -> None:
        if len(self.l2) < self.l2.capacity:
            self.l2.insert(candidate)
            writes.append((2, 1))
            return
        victim = self.l2.peek_victim()
        if self._wins(candidate, victim):
            self.l2.remove(victim)
            self.l2.insert(candidate)
            writes.append((2, 1))

    def _on_l2_hit(self, key) -> AccessOutcome:
        writes = []
        if len(self.l1) < self.l1.capacity:
            self.l2.remove(key)
            self.l1.insert(key)
            writes.append((1, 1))
        else:
            victim = self.l1.peek_victim()
            if self._wins(key, victim):
                self.l2.remove(key)
                self.l1.remove(victim)
                self.l1.insert(key)
                writes.append((1, 1))
                self.l2.insert(victim)  # slot freed by the promotion
                writes.append((2, 1))
            else:
                self.l2.touch(key)
        return AccessOutcome(HIT_L2, tuple(writes))

    def check_invariants(self) -> None:
        self.l1.check()
        self.l2.check()
        union = set(self.l1.keys()) | set(self.l2.keys())
        assert len(union) == len(self.l1) + len(self.l2)


class CascadeFilter(_FilteredMixin):
    """N-level generalization: a filter sits between every adjacent pair.

    Misses insert at the top; each admitted candidate's displaced victim
    becomes the candidate at the next level down, and the bottom level's
    displaced victim leaves the cache.  A hit at level i is a filtered
    promotion into level i-1 whose displaced victim demotes into the slot
    the hit just vacated.
    """

    name = "BiDiFilter"

    def __init__(
        self,
        level_capacities,
        *,
        window_fraction: float = 0.5,
        tie_break: str = "admit",
        rng_seed: int = 0,
        sketch: FrequencySketch | None = None,
    ):
        caps = tuple(level_capacities)
        if len(caps) < 2:
            raise ValueError("need at least two cache levels")
        if any(c < 1 for c in caps):
            raise ValueError("level capacities must be >= 1")
        if not 0.0 <= window_fraction <= 1.0:
            raise ValueError("window_fraction must be in [0, 1]")
        wcap, vcap = _split_l1(caps[0], window_fraction)
        self.window_fraction = window_fraction
        self.window = LruSpace(wcap)
        self.veterans = LruSpace(vcap)
        self.mains = tuple(SlruSpace(c) for c in caps[1:])  # levels 2..N
        self.n_levels = len(caps)
        self._init_filter(caps, tie_break, rng_seed, sketch)

    def _space_at(self, level: int):
        return self.mains[level - 2]

    def handle(self, key) -> AccessOutcome:
        self.sketch.record(key)
        if key in self.window:
            self.window.touch(key)
            return _HIT_WINDOW
        if key in self.veterans:
            self.veterans.touch(key)
            return _HIT_VETERANS
        for level in range(2, self.n_levels + 1):
            if key in self._space_at(level):
                return self._on_deep_hit(key, level)
        return self._on_miss(key)

    def _on_miss(self, key) -> AccessOutcome:
        writes = []
        if self.window.capacity > 0:
            candidate = None
            if len(self.window) >= self.window.capacity:
                candidate = self.window.peek_victim()
                self.window.remove(candidate)
            self.window.insert(key)
            writes.append((1, 1))
            if candidate is not None:
                self._cascade_admit(candidate, 2, writes)
        else:
            if len(self.veterans) < self.veterans.capacity:
                self.veterans.insert(key)
                writes.append((1, 1))
            else:
                victim = self.veterans.peek_victim()
                if self._wins(key, victim):
                    self.veterans.remove(victim)
                    self.veterans.insert(key)
                    writes.append((1, 1))
                    self._force_demote(victim, 2, writes)
                else:
                    self._cascade_admit(key, 2, writes)
        return AccessOutcome(MISS, tuple(writes))

    def _cascade_admit(self, candidate, level, writes) -> None:
        # filtered admission at `level`; displaced victims continue down
        while level <= self.n_levels:
            space = self._space_at(level)
            if len(space) < space.capacity:
                space.insert(candidate)
                writes.append((level, 1))
                return
            victim = space.peek_victim()
            if not self._wins(candidate, victim):
                return  # rejected candidates are dropped, not pushed down
            space.remove(victim)
            space.insert(candidate)
            writes.append((level, 1))
            candidate = victim
            level += 1
        # fell past the bottom level: the last victim leaves the cache

    def _force_demote(self, item, level, writes) -> None:
        # unconditional demotion (displaced Veterans victim); whatever it
        # displaces gets a fair filtered run further down
        space = self._space_at(level)
        if len(space) < space.capacity:
            space.insert(item)
            writes.append((level, 1))
            return
        victim = space.peek_victim()
        space.remove(victim)
        space.insert(item)
        writes.append((level, 1))
        self._cascade_admit(victim, level + 1, writes)

    def _on_deep_hit(self, key, level: int) -> AccessOutcome:
        src = self._space_at(level)
        if level == 2:
            target = self.veterans if self.veterans.capacity > 0 else self.window
            target_level = 1
        else:
            target = self._space_at(level - 1)
            target_level = level - 1
        writes = []
        if len(target) < target.capacity:
            src.remove(key)
            target.insert(key)
            writes.append((target_level, 1))
        else:
            victim = target.peek_victim()
            if self._wins(key, victim):
                src.remove(key)
                target.remove(victim)
                target.insert(key)
                writes.append((target_level, 1))
                src.insert(victim)  # slot freed by the promotion
                writes.append((level, 1))
            else:
                src.touch(key)
        return AccessOutcome(hit_at_level(level), tuple(writes))

    def check_invariants(self) -> None:
        self.window.check()
        self.veterans.check()
        union = set(self.window.keys()) | set(self.veterans.keys())
        total = len(self.window) + len(self.veterans)
        for sp in self.mains:
            sp.check()
            union.update(sp.keys())
            total += len(sp)
        assert len(union) == total, "a key occupies more than one space"


class _ChainPolicy:
    """Shared machinery for the unfiltered baselines (LRU at every level)."""

    def __init__(self, level_capacities):
        caps = tuple(level_capacities)
        if len(caps) < 2:
            raise ValueError("need at least two cache levels")
        if any(c < 1 for c in caps):
            raise ValueError("level capacities must be >= 1")
        self.levels = tuple(LruSpace(c) for c in caps)
        self.n_levels = len(caps)

    def _push_top(self, key, writes) -> None:
        # insert at L1 MRU; overflow victims demote level by level until
        # one lands in a level with room, the bottom victim falling out
        item = key
        for level, space in enumerate(self.levels, start=1):
            victim = None
            if len(space) >= space.capacity:
                victim = space.peek_victim()
                space.remove(victim)
            space.insert(item)
            writes.append((level, 1))
            if victim is None:
                return
            item = victim

    def check_invariants(self) -> None:
        union = set()
        total = 0
        for sp in self.levels:
            sp.check()
            union.update(sp.keys())
            total += len(sp)
        assert len(union) == total


class Demote(_ChainPolicy):
    """One global LRU order spread across the levels.

    Hits anywhere move the key to L1 MRU; the displaced items slide one
    level down, so the concatenated spaces always equal a single LRU
    stack of the combined capacity.
    """

    name = "Demote"

    def handle(self, key) -> AccessOutcome:
        for i, space in enumerate(self.levels):
            if key in space:
                if i == 0:
                    space.touch(key)
                    return _HIT_WINDOW
                space.remove(key)
                writes = []
                self._push_top(key, writes)
                return AccessOutcome(hit_at_level(i + 1), tuple(writes))
        writes = []
        self._push_top(key, writes)
        return AccessOutcome(MISS, tuple(writes))


class NaiveLRU(_ChainPolicy):
    """Independent LRU levels: hits refresh in place and never move up."""

    name = "NaiveLRU"

    def handle(self, key) -> AccessOutcome:
        for i, space in enumerate(self.levels):
            if key in space:
                space.touch(key)
                return _HIT_WINDOW if i == 0 else AccessOutcome(hit_at_level(i + 1))
        writes = []
        self._push_top(key, writes)
        return AccessOutcome(MISS, tuple(writes))


class Promote(_ChainPolicy):
    """Coin-flip middle ground between Demote and NaiveLRU.

    A hit below L1 promotes with probability promote_prob (else it just
    refreshes in place); each demotion hop actually writes the victim to
    the next level with probability demote_prob (else the victim is
    dropped and the cascade stops).  promote_prob=1, demote_prob=1 is
    exactly Demote; promote_prob=0, demote_prob=1 is exactly NaiveLRU.

    Draw order per request: one draw for the promotion decision on a
    deep hit, then one draw per demotion hop, top down.
    """

    name = "Promote"

    def __init__(self, level_capacities, *, promote_prob=0.5, demote_prob=0.5, rng_seed=0):
        super().__init__(level_capacities)
        if not 0.0 <= promote_prob <= 1.0:
            raise ValueError("promote_prob must be in [0, 1]")
        if not 0.0 <= demote_prob <= 1.0:
            raise ValueError("demote_prob must be in [0, 1]")
        self.promote_prob = promote_prob
        self.demote_prob = demote_prob
        self.rng = random.Random(rng_seed)

    def handle(self, key) -> AccessOutcome:
        for i, space in enumerate(self.levels):
            if key in space:
                if i == 0:
                    space.touch(key)
                    return _HIT_WINDOW
                if self.rng.random() < self.promote_prob:
                    space.remove(key)
                    writes = []
                    self._push_top_prob(key, writes)
                    return AccessOutcome(hit_at_level(i + 1), tuple(writes))
                space.touch(key)
                return AccessOutcome(hit_at_level(i + 1))
        writes = []
        self._push_top_prob(key, writes)
        return AccessOutcome(MISS, tuple(writes))

    def _push_top_prob(self, key, writes) -> None:
        item = key
        for level, space in enumerate(self.levels, start=1):
            victim = None
            if len(space) >= space.capacity:
                victim = space.peek_victim()
                space.remove(victim)
            space.insert(item)
            writes.append((level, 1))
            if victim is None:
                return
            if self.rng.random() >= self.demote_prob:
                return  # victim dropped instead of written onward
            item = victim
