import itertools
import math

import pytest

from cachelab import (
    annotate_next_use,
    belady_run,
    exhaustive_opt,
    gen_cycle,
    gen_fuzz,
    make_policy,
)

INF = math.inf


class TestAnnotate:
    def test_basic(self):
        assert annotate_next_use([1, 2, 1]) == [2, INF, INF]

    def test_empty(self):
        assert annotate_next_use([]) == []

    def test_repeated_page(self):
        assert annotate_next_use([5, 5, 5]) == [1, 2, INF]


class TestBelady:
    def test_furthest_next_use_evicted(self):
        schedule = belady_run([1, 2, 3, 1, 2], 2)
        assert schedule.miss_count == 4
        assert schedule.miss_flags() == [True, True, True, False, True]
        # at position 2, page 2 (next use 4) goes instead of page 1 (next use 3)
        assert schedule.steps[2].evicted == 2

    def test_compulsory_misses_only_when_everything_fits(self):
        trace = gen_fuzz(5, 300, seed=3)
        schedule = belady_run(trace, 8)
        assert schedule.miss_count == len(set(trace))
        assert all(s.evicted is None for s in schedule.steps)

    def test_cycle_cross_checked_against_exhaustive(self):
        trace = [p + 1 for p in gen_cycle(4, 20)]
        exact = exhaustive_opt(trace, 3, max_length=20, max_distinct=5, max_capacity=3)
        assert belady_run(trace, 3).miss_count == exact == 9

    def test_requested_page_always_cached_after(self):
        trace = gen_fuzz(7, 400, seed=13)
        schedule = belady_run(trace, 3)
        for page, step in zip(trace, schedule.steps):
            assert page in step.cache_after
            assert len(step.cache_after) <= 3

    def test_demand_paging_changes_cache_only_on_miss(self):
        trace = gen_fuzz(7, 400, seed=19)
        schedule = belady_run(trace, 3)
        previous = frozenset()
        for step in schedule.steps:
            if step.was_hit:
                assert step.cache_after == previous
                assert step.evicted is None
            else:
                added = step.cache_after - previous
                gone = previous - step.cache_after
                assert len(added) == 1
                assert len(gone) in (0, 1)
                assert (step.evicted is not None) == (len(gone) == 1)
            previous = step.cache_after

    def test_capacity_validated(self):
        with pytest.raises(ValueError):
            belady_run([1, 2], 0)


class TestExhaustive:
    def test_known_small_instances(self):
        assert exhaustive_opt([1, 2, 3, 1, 2], 2) == 4
        assert exhaustive_opt([1, 2, 1, 2], 1) == 4
        assert exhaustive_opt([1, 2, 1, 2], 2) == 2

    def test_rejects_out_of_bounds_instances(self):
        with pytest.raises(ValueError):
            exhaustive_opt(list(range(13)), 2)
        with pytest.raises(ValueError):
            exhaustive_opt([1, 2, 3, 4, 5, 6], 2)
        with pytest.raises(ValueError):
            exhaustive_opt([1, 2, 3], 4)

    def test_matches_belady_on_three_letter_traces_up_to_length_six(self):
        for length in range(7):
            for trace in itertools.product(range(3), repeat=length):
                trace = list(trace)
                assert belady_run(trace, 2).miss_count == exhaustive_opt(trace, 2)


def test_optimality_dominates_online_policies():
    for seed in range(6):
        trace = gen_fuzz(10, 500, seed=800 + seed)
        opt_misses = belady_run(trace, 4).miss_count
        for name in ("lru", "clock", "arc", "car"):
            policy = make_policy(name, 4)
            misses = sum(0 if policy.request(p).was_hit else 1 for p in trace)
            assert opt_misses <= misses
