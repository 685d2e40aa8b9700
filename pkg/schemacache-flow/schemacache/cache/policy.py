"""
Eviction policies for the fast tier.  Each policy holds metadata for
exactly the resident tables and names the table to evict when full.
"""

from collections import OrderedDict

LRU = "lru"
FIFO = "fifo"
LFU = "lfu"

class EvictionPolicy:

    name = None

    def __init__(self):
        self.entries = OrderedDict()

    def __contains__(self, table_id):
        return table_id in self.entries

    def __len__(self):
        return len(self.entries)

    def keys(self):
        return set(self.entries.keys())

    def admit(self, table_id, now):
        raise NotImplementedError()

    def touch(self, table_id, now):
        raise NotImplementedError()

    def victim(self, pinned=()):
        """Table to evict, never one in pinned.  None if all are pinned"""
        raise NotImplementedError()

    def remove(self, table_id):
        del self.entries[table_id]

class LRUPolicy(EvictionPolicy):
    """Most recent at the end of the ordering, victim at the start"""

    name = LRU

    def admit(self, table_id, now):
        self.entries[table_id] = now

    def touch(self, table_id, now):
        self.entries[table_id] = now
        self.entries.move_to_end(table_id)

    def victim(self, pinned=()):
        return next((t for t in self.entries if t not in pinned), None)

class FIFOPolicy(EvictionPolicy):
    """Arrival order only, hits change nothing"""

    name = FIFO

    def admit(self, table_id, now):
        self.entries[table_id] = now

    def touch(self, table_id, now):
        pass

    def victim(self, pinned=()):
        return next((t for t in self.entries if t not in pinned), None)

class LFUPolicy(EvictionPolicy):
    """
    table_id -> (frequency, timestamp).  Victim has the smallest frequency,
    then the smallest timestamp, then the smallest table id.
    """

    name = LFU

    def admit(self, table_id, now):
        self.entries[table_id] = (1, now)

    def touch(self, table_id, now):
        freq, _ = self.entries[table_id]
        self.entries[table_id] = (freq + 1, now)

    def victim(self, pinned=()):
        return min(
            (t for t in self.entries if t not in pinned),
            key=lambda t: (self.entries[t][0], self.entries[t][1], t),
            default=None,
        )

    def frequency(self, table_id):
        return self.entries[table_id][0]

POLICIES = {
    LRU: LRUPolicy,
    FIFO: FIFOPolicy,
    LFU: LFUPolicy,
}

def make_policy(name):
    try:
        return POLICIES[name.lower()]()
    except KeyError:
        raise ValueError(
            f"Eviction policy {name} not known, use one of "
            f"{', '.join(sorted(POLICIES))}"
        )

