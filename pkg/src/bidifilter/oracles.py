"""Deliberately slow reference implementations, for tests only.

Everything here favors obviousness over speed: exact counting by
scanning, LRU as a python list, Zipf probabilities by direct summation.
The test suite checks the fast paths against these.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence


def exact_counts(keys: Iterable) -> Counter:
    """True occurrence count of every key, by plain counting."""
    counts = Counter()
    for key in keys:
        counts[key] += 1
    return counts


def exact_count(keys: Iterable, key) -> int:
    """Occurrences of one key, by scanning the whole stream."""
    return sum(1 for k in keys if k == key)


def reference_lru_hits(keys: Sequence, capacity: int) -> int:
    """Hits of a single LRU cache of ``capacity``, simulated with a list."""
    if capacity < 1:
        raise ValueError("capacity must be >= 1")
    cache: list = []  # index 0 is the least recently used
    hits = 0
    for key in keys:
        if key in cache:
            cache.remove(key)
            cache.append(key)
            hits += 1
        else:
            cache.append(key)
            if len(cache) > capacity:
                cache.pop(0)
    return hits


def reference_lru_contents(keys: Sequence, capacity: int) -> list:
    """Final contents of the same list-based LRU, least recent first."""
    if capacity < 1:
        raise ValueError("capacity must be >= 1")
    cache: list = []
    for key in keys:
        if key in cache:
            cache.remove(key)
        cache.append(key)
        if len(cache) > capacity:
            cache.pop(0)
    return cache


def exact_zipf_probabilities(ground_set: int, skew: float) -> list[float]:
    """P(rank = r) for r in 1..ground_set, normalized by direct summation."""
    if ground_set < 1:
        raise ValueError("ground_set must be >= 1")
    weights = [r ** -skew for r in range(1, ground_set + 1)]
    total = sum(weights)
    return [w / total for w in weights]
