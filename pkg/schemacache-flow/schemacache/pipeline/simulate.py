"""
Virtual-clock simulation of one batch over a compute stream and a transfer
stream.  Both modes see the same sequence of cache accesses, so residency
and swap counts agree and only the timing differs.
"""

import dataclasses
import logging

from .. schema.types import FORMAT_VERSION
from .. exceptions import CapacityTooSmall

logger = logging.getLogger(__name__)

OVERLAPPED = "overlapped"
SERIAL = "serial"
FULL_PREFILL = "full prefill"

@dataclasses.dataclass
class SimReport:
    mode : str
    query_ids : list = dataclasses.field(default_factory=list)
    ttft : list = dataclasses.field(default_factory=list)
    total_ttft : float = 0.0
    serial_baseline_ttft : float = 0.0
    hits : int = 0
    misses : int = 0
    swaps : int = 0
    prefetch_loads : int = 0
    compute_time : float = 0.0
    transfer_time : float = 0.0
    # Positions in the submitted batch, in execution order
    order : list = dataclasses.field(default_factory=list)
    label : str | None = None

    def __len__(self):
        return len(self.ttft)

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            **dataclasses.asdict(self),
        }

    def summary(self):
        return {
            k: getattr(self, k)
            for k in (
                "mode", "total_ttft", "serial_baseline_ttft", "hits",
                "misses", "swaps", "prefetch_loads", "compute_time",
                "transfer_time",
            )
        }

    def rows(self):
        return [
            {
                "query_id": q, "position": i, "ttft": t,
                "config": self.label or self.mode,
            }
            for i, (q, t) in enumerate(zip(self.query_ids, self.ttft))
        ]

class _Timeline:

    def __init__(self, overlapped):
        self.overlapped = overlapped
        self.transfer = 0.0
        # Compute end of the latest finished query
        self.compute = 0.0
        self.ends = []
        self.ready = {}
        self.last_use = {}

    def gate(self, window_start):
        if window_start == 0: return 0.0
        return self.ends[window_start - 1]

    def load(self, table_id, cost, victim, window_start):

        if self.overlapped:
            start = max(self.transfer, self.gate(window_start))
            if victim is not None:
                start = max(start, self.last_use.get(victim, 0.0))
        else:
            start = max(self.transfer, self.compute)

        self.transfer = start + cost
        self.ready[table_id] = self.transfer

        return start

    def finish(self, tables, work):

        ready = max((self.ready.get(t, 0.0) for t in tables), default=0.0)

        self.compute = max(self.compute, ready) + work
        self.ends.append(self.compute)

        for t in tables:
            self.last_use[t] = self.compute

def simulate(plan, cost_model, cache, mode=OVERLAPPED, backend=None):
    """
    A query's own tables are never evicted while it loads.  In overlapped
    mode misses on a window's prefetch set go through cache.prefetch.
    Without a cache every access is a load charged the switch overhead.
    """

    if mode not in (OVERLAPPED, SERIAL):
        raise ValueError(f"Simulation mode {mode} not known")

    if backend is None:
        if cache is None:
            raise ValueError("Simulation without a cache needs a backend")
        backend = cache.backend

    if cache is not None:
        widest = max((len(q.tables) for q in plan.queries), default=0)
        if widest > cache.capacity:
            raise CapacityTooSmall(
                f"A query needs {widest} tables, cache holds {cache.capacity}"
            )
        before = cache.counters()

    overlapped = _Timeline(True)
    serial = _Timeline(False)
    timeline = overlapped if mode == OVERLAPPED else serial

    report = SimReport(mode=mode)

    for j, query in enumerate(plan.queries):

        tables = sorted(query.tables)

        # Queries past their window's compute micro-batch load ahead of use
        batch = plan.batches[plan.window[j]]
        ahead = j >= batch.end

        context = 0

        for t in tables:

            tokens = backend.token_count(t)
            context += tokens

            window_start = batch.start
            pinned = query.tables

            if cache is None:
                cost = cost_model.load(tokens, True)
                report.misses += 1
                report.swaps += 1
                victim = None
            elif t in cache:
                cache.access(t)
                report.hits += 1
                continue
            else:

                prefetch = ahead and t in batch.prefetch

                if prefetch:
                    guarded = pinned | batch.tables
                    if cache.can_admit(t, guarded):
                        pinned = guarded
                    else:
                        # Deferred rather than evict the current micro-batch
                        prefetch = False
                        window_start = batch.end

                victim = cache.would_evict(t, pinned)
                cost = cost_model.load(tokens, victim is not None)

            overlapped.load(t, cost, victim, window_start)
            serial.load(t, cost, victim, window_start)
            report.transfer_time += cost

            if cache is None: continue

            if prefetch and mode == OVERLAPPED:
                cache.prefetch([ t ], pinned=pinned)
            else:
                cache.access(t, pinned=pinned)

        work = cost_model.compute(context, query.query_len)
        report.compute_time += work

        overlapped.finish(tables, work)
        serial.finish(tables, work)

        report.query_ids.append(query.query_id)

    report.ttft = list(timeline.ends)
    report.total_ttft = sum(timeline.ends)
    report.serial_baseline_ttft = sum(serial.ends)

    if cache is not None:
        after = cache.counters()
        report.hits = after["hits"] - before["hits"]
        report.misses = after["misses"] - before["misses"]
        report.swaps = after["swaps"] - before["swaps"]
        report.prefetch_loads = (
            after["prefetch_loads"] - before["prefetch_loads"]
        )

    logger.debug(
        f"Simulated {len(plan)} queries {mode}: total {report.total_ttft:.6g}, "
        f"serial {report.serial_baseline_ttft:.6g}"
    )

    return report

def prefill_baseline(queries, cost_model, backend):
    """Every query recomputes its whole prompt, one after another"""

    report = SimReport(mode=FULL_PREFILL)

    clock = 0.0

    for query in queries:
        tokens = sum(backend.token_count(t) for t in query.tables)
        work = cost_model.full_prefill(tokens + query.query_len)
        clock += work
        report.compute_time += work
        report.query_ids.append(query.query_id)
        report.ttft.append(clock)

    report.total_ttft = sum(report.ttft)
    report.serial_baseline_ttft = report.total_ttft

    return report

