"""Offline-optimal demand paging.

belady_run evicts the cached page whose next use lies furthest in the
future, which is optimal among all demand-paging strategies.
exhaustive_opt independently brute-forces the minimum miss count over
every possible eviction choice on small instances, so the two can be
cross-checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import canonical_key


@dataclass(frozen=True)
class OptStep:
    was_hit: bool
    evicted: object
    cache_after: frozenset


@dataclass
class OptSchedule:
    """Per-request record of the optimal run: hit flags, evictions, and
    the full cache contents after each step."""

    capacity: int
    steps: list = field(default_factory=list)

    @property
    def miss_count(self):
        return sum(1 for s in self.steps if not s.was_hit)

    def miss_flags(self):
        return [not s.was_hit for s in self.steps]


def annotate_next_use(trace):
    """For each position i, the smallest j > i with trace[j] == trace[i],
    or math.inf when the page never recurs."""
    nxt = [math.inf] * len(trace)
    last_seen = {}
    for i in range(len(trace) - 1, -1, -1):
        page = trace[i]
        nxt[i] = last_seen.get(page, math.inf)
        last_seen[page] = i
    return nxt


def belady_run(trace, capacity):
    """Optimal schedule for the trace under demand paging.

    On a miss with a full cache the victim is the page with the furthest
    next use; among pages never used again the one with the smallest
    canonical token order goes, which keeps runs deterministic (any such
    choice is optimal).
    """
    if capacity < 1:
        raise ValueError("capacity must be at least 1, got %r" % (capacity,))
    next_use = annotate_next_use(trace)
    cache = {}  # page -> index of its next use
    schedule = OptSchedule(capacity=capacity)
    for i, page in enumerate(trace):
        if page in cache:
            cache[page] = next_use[i]
            schedule.steps.append(OptStep(True, None, frozenset(cache)))
            continue
        evicted = None
        if len(cache) == capacity:
            victim = None
            victim_use = -1
            for cached, use in cache.items():
                if use > victim_use or (
                    use == victim_use and canonical_key(cached) < canonical_key(victim)
                ):
                    victim, victim_use = cached, use
            del cache[victim]
            evicted = victim
        cache[page] = next_use[i]
        schedule.steps.append(OptStep(False, evicted, frozenset(cache)))
    return schedule


def exhaustive_opt(trace, capacity, max_length=12, max_distinct=5, max_capacity=3):
    """Exact minimum miss count over all demand-paging eviction strategies.

    Memoized search over (position, cache contents); instances beyond the
    configured bounds are rejected because the state space explodes.
    """
    distinct = len(set(trace))
    if len(trace) > max_length:
        raise ValueError("trace length %d exceeds search bound %d" % (len(trace), max_length))
    if distinct > max_distinct:
        raise ValueError("%d distinct pages exceed search bound %d" % (distinct, max_distinct))
    if capacity > max_capacity:
        raise ValueError("capacity %d exceeds search bound %d" % (capacity, max_capacity))
    if capacity < 1:
        raise ValueError("capacity must be at least 1, got %r" % (capacity,))

    memo = {}

    def best(i, cache):
        if i == len(trace):
            return 0
        key = (i, cache)
        found = memo.get(key)
        if found is not None:
            return found
        page = trace[i]
        if page in cache:
            result = best(i + 1, cache)
        elif len(cache) < capacity:
            result = 1 + best(i + 1, cache | {page})
        else:
            result = 1 + min(
                best(i + 1, (cache - {victim}) | {page}) for victim in cache
            )
        memo[key] = result
        return result

    return best(0, frozenset())
