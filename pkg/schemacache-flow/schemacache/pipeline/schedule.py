"""
Partition of an ordered batch into compute micro-batches of b_c queries,
with the prefetch lookahead of b_m queries past each one.
"""

import dataclasses

from .. exceptions import EmptyBatch

default_b_c = 100
default_b_m = 10

@dataclasses.dataclass(frozen=True)
class MicroBatch:
    start : int
    end : int
    # Tables the queries of this micro-batch reference
    tables : frozenset
    # Tables of the next b_m queries not resident at plan time
    prefetch : frozenset

    def __len__(self):
        return self.end - self.start

@dataclasses.dataclass
class BatchPlan:
    queries : list
    b_c : int
    b_m : int
    batches : list[MicroBatch]
    # Query index -> micro-batch during whose compute its tables may load
    window : list[int]

    def __len__(self):
        return len(self.queries)

    def sizes(self):
        return [len(b) for b in self.batches]

def schedule(queries, b_c=default_b_c, b_m=default_b_m, resident=()):

    if b_c < 1 or b_m < 1:
        raise ValueError(f"Micro-batch sizes must be positive, got {b_c}/{b_m}")

    if not queries:
        raise EmptyBatch("Nothing to schedule")

    n = len(queries)
    resident = frozenset(resident)

    def tables(lo, hi):
        return frozenset().union(*(queries[j].tables for j in range(lo, hi)))

    batches = []

    for start in range(0, n, b_c):
        end = min(start + b_c, n)
        batches.append(MicroBatch(
            start=start, end=end, tables=tables(start, end),
            prefetch=tables(end, min(end + b_m, n)) - resident,
        ))

    window = []
    i = 0
    for j in range(n):
        while j >= batches[i].end + b_m:
            i += 1
        window.append(i)

    return BatchPlan(
        queries=list(queries), b_c=b_c, b_m=b_m, batches=batches,
        window=window,
    )

