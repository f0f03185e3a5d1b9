"""Adaptive dual-list replacement with ghost history (ARC).

The cache is split into a recency list T1 and a frequency list T2, backed
by ghost lists B1 and B2 that remember recently demoted pages without
holding their data. A self-tuned target p in [0, N] steers how many slots
the recency side may keep: REPLACE demotes from T1 while T1 runs above
target, from T2 otherwise.

Two adaptation rules are selectable. ADAPT_UNIT bumps p by exactly one
per ghost hit; ADAPT_RATIO moves it by the ratio of the opposite ghost
list's size (integer division, floored at 1), evaluated while the
requested page still sits in its ghost list. ADAPT_UNIT is the variant
the step-by-step bound checker covers.
"""

from __future__ import annotations

from collections import OrderedDict

from .core import AccessOutcome, Policy, render_pages

ADAPT_UNIT = "unit"
ADAPT_RATIO = "ratio"


class ArcCache(Policy):
    """ARC policy state: four ordered lists plus the adaptive target p.

    All four OrderedDicts run LRU -> MRU left to right; t1/t2 hold cached
    pages, b1/b2 the ghost entries. The five-way invariants (pairwise
    disjoint lists, |T1|+|T2| <= N, |T1|+|B1| <= N, directory <= 2N) hold
    after every request; see analysis.check_arc_structure.
    """

    kind = "ARC"

    def __init__(self, capacity, adaptation=ADAPT_UNIT):
        super().__init__(capacity)
        if adaptation not in (ADAPT_UNIT, ADAPT_RATIO):
            raise ValueError("unknown adaptation %r" % (adaptation,))
        self.adaptation = adaptation
        self.p = 0
        self.t1 = OrderedDict()
        self.t2 = OrderedDict()
        self.b1 = OrderedDict()
        self.b2 = OrderedDict()
        self.replace_invocations = 0

    # -- state views -------------------------------------------------

    def t1_list(self):
        return list(reversed(self.t1))

    def t2_list(self):
        return list(reversed(self.t2))

    def b1_list(self):
        return list(reversed(self.b1))

    def b2_list(self):
        return list(reversed(self.b2))

    def cached_pages(self):
        return set(self.t1) | set(self.t2)

    @property
    def is_full(self):
        return len(self.t1) + len(self.t2) == self.capacity

    def digest(self):
        return "ARC p=%d T1=%s T2=%s B1=%s B2=%s" % (
            self.p,
            render_pages(self.t1_list()),
            render_pages(self.t2_list()),
            render_pages(self.b1_list()),
            render_pages(self.b2_list()),
        )

    # -- the algorithm -----------------------------------------------

    def adapt(self, hit_list):
        """Move the target p for a ghost hit in B1 (grow) or B2 (shrink).

        Under ADAPT_RATIO the hit list must still contain the requested
        page, so its size is at least 1 and the division is safe.
        """
        if hit_list == "B1":
            if self.adaptation == ADAPT_UNIT:
                step = 1
            else:
                step = max(1, len(self.b2) // len(self.b1))
            self.p = min(self.p + step, self.capacity)
        elif hit_list == "B2":
            if self.adaptation == ADAPT_UNIT:
                step = 1
            else:
                step = max(1, len(self.b1) // len(self.b2))
            self.p = max(self.p - step, 0)
        else:
            raise ValueError("hit_list must be 'B1' or 'B2', got %r" % (hit_list,))
        return self.p

    def replace(self, requested_in_b2):
        """Demote one page from the cache into its ghost list.

        Takes LRU(T1) into B1 when T1 is nonempty and either runs above
        target or sits exactly at target while the request came from B2;
        otherwise takes LRU(T2) into B2. Only legal while the cache is
        full; a call on a non-full cache signals a harness bug.
        """
        if len(self.t1) + len(self.t2) != self.capacity:
            raise RuntimeError("REPLACE requires a full cache (|T1|+|T2| = capacity)")
        self.replace_invocations += 1
        t1_len = len(self.t1)
        if t1_len >= 1 and ((requested_in_b2 and t1_len == self.p) or t1_len > self.p):
            victim, _ = self.t1.popitem(last=False)
            self.b1[victim] = True
            return victim, "B1"
        victim, _ = self.t2.popitem(last=False)
        self.b2[victim] = True
        return victim, "B2"

    def request(self, page):
        if page in self.t1 or page in self.t2:
            # cache hit: promote to MRU of the frequency list
            if page in self.t1:
                del self.t1[page]
            else:
                del self.t2[page]
            self.t2[page] = True
            return AccessOutcome(was_hit=True)

        old_p = self.p
        if page in self.b1:
            self.adapt("B1")
            moved, dest = self.replace(requested_in_b2=False)
            del self.b1[page]
            self.t2[page] = True
            return AccessOutcome(
                was_hit=False,
                evicted_cache_page=moved,
                replace_dest=dest,
                adaptation_delta=self.p - old_p,
                history_hit="B1",
            )
        if page in self.b2:
            self.adapt("B2")
            moved, dest = self.replace(requested_in_b2=True)
            del self.b2[page]
            self.t2[page] = True
            return AccessOutcome(
                was_hit=False,
                evicted_cache_page=moved,
                replace_dest=dest,
                adaptation_delta=self.p - old_p,
                history_hit="B2",
            )

        # full directory miss
        moved = dest = None
        dropped = None
        hist_evicted = hist_from = None
        l1 = len(self.t1) + len(self.b1)
        total = l1 + len(self.t2) + len(self.b2)
        if l1 == self.capacity:
            if len(self.t1) < self.capacity:
                hist_evicted, _ = self.b1.popitem(last=False)
                hist_from = "B1"
                moved, dest = self.replace(requested_in_b2=False)
            else:
                # B1 is empty and T1 fills the cache: drop LRU(T1) outright
                dropped, _ = self.t1.popitem(last=False)
        elif total >= self.capacity:
            if total == 2 * self.capacity:
                hist_evicted, _ = self.b2.popitem(last=False)
                hist_from = "B2"
            moved, dest = self.replace(requested_in_b2=False)
        # while the directory is smaller than the cache nothing is evicted
        self.t1[page] = True
        return AccessOutcome(
            was_hit=False,
            evicted_cache_page=moved if moved is not None else dropped,
            evicted_history_page=hist_evicted,
            history_evicted_from=hist_from,
            replace_dest=dest,
        )
