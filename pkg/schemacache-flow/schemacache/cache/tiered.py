"""
Two-tier KV cache.  The fast tier holds at most `capacity` table ids with
policy metadata; the slow tier is a backend holding every precomputed
table.  Demand gets and prefetches are counted separately.
"""

import dataclasses
import logging

from . policy import make_policy, LRU
from .. exceptions import UnknownTable, CacheNotFull, CapacityTooSmall

logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class Access:
    table_id : int
    hit : bool
    prefetch : bool
    evicted : int | None = None
    tokens_loaded : int = 0

class TieredCache:

    def __init__(self, capacity, backend, policy=LRU):

        if capacity < 1:
            raise CapacityTooSmall(f"Cache capacity {capacity} is below 1")

        self.capacity = capacity
        self.backend = backend
        self.policy = make_policy(policy)

        self.clock = 0

        self.hits = 0
        self.misses = 0
        self.swaps = 0
        self.prefetch_loads = 0
        self.tokens_loaded = 0

        # Optional callable(Access), set by callers that meter events
        self.observer = None

    def __contains__(self, table_id):
        return table_id in self.policy

    def __len__(self):
        return len(self.policy)

    @property
    def policy_name(self):
        return self.policy.name

    def resident(self):
        return self.policy.keys()

    def full(self):
        return len(self.policy) >= self.capacity

    def counters(self):
        return {
            "hits": self.hits,
            "misses": self.misses,
            "swaps": self.swaps,
            "prefetch_loads": self.prefetch_loads,
        }

    def _victim(self, pinned):

        victim = self.policy.victim(pinned)

        if victim is None:
            raise CapacityTooSmall(
                f"All {len(self.policy)} resident tables are pinned"
            )

        return victim

    def evict_candidate(self, pinned=()):

        if not self.full():
            raise CacheNotFull(
                f"Fast tier holds {len(self.policy)} of {self.capacity}, "
                "nothing to evict"
            )

        return self._victim(pinned)

    def would_evict(self, table_id, pinned=()):
        """The table a miss on table_id would evict now, or None"""

        if table_id in self.policy or not self.full():
            return None

        return self._victim(pinned)

    def can_admit(self, table_id, pinned=()):
        """True if table_id fits without evicting a pinned table"""
        if table_id in self.policy or not self.full(): return True
        return self.policy.victim(pinned) is not None

    def _tick(self, now):
        if now is None:
            self.clock += 1
            return self.clock
        self.clock = max(self.clock, now)
        return now

    def access(self, table_id, now=None, prefetch=False, pinned=()):
        """
        One fast-tier access without materialising the KV block.  A miss
        never evicts a table in pinned.
        """

        if table_id not in self.backend:
            raise UnknownTable(f"Table {table_id} was never precomputed")

        now = self._tick(now)

        if table_id in self.policy:

            self.policy.touch(table_id, now)

            if not prefetch:
                self.hits += 1

            result = Access(table_id=table_id, hit=True, prefetch=prefetch)

        else:

            evicted = None

            if self.full():
                evicted = self._victim(pinned)
                self.policy.remove(evicted)
                self.swaps += 1
                logger.debug(f"Evict table {evicted} for {table_id}")

            self.policy.admit(table_id, now)

            tokens = self.backend.token_count(table_id)
            self.tokens_loaded += tokens

            if prefetch:
                self.prefetch_loads += 1
            else:
                self.misses += 1

            result = Access(
                table_id=table_id, hit=False, prefetch=prefetch,
                evicted=evicted, tokens_loaded=tokens,
            )

        if self.observer:
            self.observer(result)

        return result

    def get(self, table_id, now=None):
        result = self.access(table_id, now)
        return self.backend.load(table_id), result.hit

    def prefetch(self, table_ids, now=None, pinned=()):
        """Load absent tables ahead of use, returning the admitted ids"""

        admitted = []

        for t in table_ids:
            if self.access(t, now, prefetch=True, pinned=pinned).hit: continue
            admitted.append(t)

        return admitted

