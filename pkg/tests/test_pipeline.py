
import random

import pytest

from schemacache.cache import MemoryBackend, TieredCache, LRU, FIFO, LFU
from schemacache.rerank import QueryRecord
from schemacache.pipeline import CostModel, schedule, simulate
from schemacache.pipeline import OVERLAPPED, SERIAL, prefill_baseline
from schemacache.pipeline import CacheConfig, run_batch, run_ablations
from schemacache.pipeline import FULL, NO_PIPELINE, NO_RERANK, NO_CACHE
from schemacache.schema import load_workload
from schemacache.cli import Engine
from schemacache.exceptions import EmptyBatch, CapacityTooSmall

def query(ix, tables, n=16, query_len=5):
    return QueryRecord.create(
        f"q{ix}", [0] * query_len, tables, n, query_len=query_len,
    )

def backend(counts):
    return MemoryBackend.placeholder(counts)

def test_micro_batch_sizes():

    plan = schedule([ query(i, [i]) for i in range(5) ], b_c=2, b_m=1)

    assert plan.sizes() == [2, 2, 1]
    assert plan.batches[0].tables == {0, 1}
    assert plan.batches[0].prefetch == {2}
    assert plan.batches[2].prefetch == frozenset()
    assert plan.window == [0, 0, 0, 1, 1]

def test_single_micro_batch_has_nothing_to_prefetch():

    plan = schedule([ query(i, [i % 7]) for i in range(100) ], 100, 10)

    assert plan.sizes() == [100]
    assert plan.batches[0].prefetch == frozenset()

def test_prefetch_skips_resident():
    plan = schedule([ query(0, [0]), query(1, [1, 2]) ], 1, 1, resident=[1])
    assert plan.batches[0].prefetch == {2}

def test_schedule_errors():

    with pytest.raises(EmptyBatch):
        schedule([], 2, 2)

    with pytest.raises(ValueError):
        schedule([ query(0, [0]) ], 0, 2)

def test_cost_model():

    c = CostModel(compute_per_token=2.0, load_per_token=0.5, switch_overhead=3.0)

    assert c.compute(10, 4) == 2.0 * (40 + 8)
    assert c.load(6, False) == 3.0
    assert c.load(6, True) == 6.0
    assert c.full_prefill(4) == 16.0

    with pytest.raises(ValueError):
        CostModel(load_per_token=-1)

def test_single_cold_query():

    cost = CostModel(compute_per_token=1e-4, load_per_token=1e-3)
    cache = TieredCache(4, backend({ 0: 10, 1: 10 }))
    plan = schedule([ query(0, [0, 1]) ], 1, 1)

    r = simulate(plan, cost, cache)

    assert r.ttft == pytest.approx([ 20e-3 + 1e-4 * (20 * 5 + 12.5) ])
    assert r.total_ttft == pytest.approx(r.serial_baseline_ttft)
    assert (r.hits, r.misses, r.swaps, r.prefetch_loads) == (0, 2, 0, 0)
    assert r.transfer_time == pytest.approx(20e-3)

def test_load_overlaps_previous_compute():

    cost = CostModel(compute_per_token=1.0, load_per_token=1.0, switch_overhead=0)
    cache = TieredCache(2, backend({ 0: 10, 1: 10 }))
    plan = schedule([ query(0, [0], query_len=2), query(1, [1], query_len=2) ], 1, 1)

    r = simulate(plan, cost, cache)

    # q0: load [0, 10], compute 22.  q1 loads during q0's compute.
    assert r.ttft == [32.0, 54.0]
    assert r.total_ttft == 86.0
    assert r.serial_baseline_ttft == 32.0 + 64.0
    assert (r.misses, r.prefetch_loads) == (1, 1)

def test_serial_mode_waits_for_compute():

    cost = CostModel(compute_per_token=1.0, load_per_token=1.0, switch_overhead=0)
    cache = TieredCache(2, backend({ 0: 10, 1: 10 }))
    plan = schedule([ query(0, [0], query_len=2), query(1, [1], query_len=2) ], 1, 1)

    r = simulate(plan, cost, cache, mode=SERIAL)

    assert r.ttft == [32.0, 64.0]
    assert (r.misses, r.prefetch_loads) == (2, 0)

def test_eviction_waits_for_last_use():

    cost = CostModel(compute_per_token=1.0, load_per_token=1.0, switch_overhead=0)
    cache = TieredCache(1, backend({ 0: 10, 1: 10 }))
    plan = schedule([ query(0, [0], query_len=2), query(1, [1], query_len=2) ], 1, 1)

    r = simulate(plan, cost, cache)

    # Table 0 is pinned until q0 finishes at 32, so the prefetch of 1 is
    # deferred and loads on demand
    assert r.ttft == [32.0, 64.0]
    assert r.swaps == 1
    assert (r.misses, r.prefetch_loads) == (2, 0)

def test_prefetch_follows_plan():

    cost = CostModel(compute_per_token=1.0, load_per_token=1.0, switch_overhead=0)
    cache = TieredCache(2, backend({ 0: 10, 1: 10 }))

    # Table 1 was resident when planned, so it is not in the prefetch set
    plan = schedule(
        [ query(0, [0], query_len=2), query(1, [1], query_len=2) ], 1, 1,
        resident=[1],
    )

    r = simulate(plan, cost, cache)

    assert r.ttft == [32.0, 54.0]
    assert (r.misses, r.prefetch_loads) == (2, 0)

def watch(cache):
    events = []
    cache.observer = events.append
    return events

def assert_tables_stay_resident(queries, events):
    """Each query accesses its own tables in turn and evicts none of them"""

    events = iter(events)

    for q in queries:
        group = [ next(events) for _ in q.tables ]
        assert sorted(a.table_id for a in group) == sorted(q.tables)
        assert not { a.evicted for a in group } & q.tables

    assert next(events, None) is None

@pytest.mark.parametrize("policy", [ LRU, FIFO, LFU ])
@pytest.mark.parametrize("mode", [ OVERLAPPED, SERIAL ])
def test_query_never_evicts_its_own_tables(policy, mode):

    A, B, C = 0, 1, 2

    cache = TieredCache(2, backend({ A: 4, B: 4, C: 4 }), policy)
    events = watch(cache)

    queries = [
        query(0, [A], 3), query(1, [B], 3), query(2, [B], 3),
        query(3, [B], 3), query(4, [A, C], 3),
    ]

    simulate(schedule(queries, 1, 1), CostModel(), cache, mode=mode)

    # A was hit by the last query, so B has to go for C
    assert cache.resident() == { A, C }
    assert_tables_stay_resident(queries, events)

def max_plus_ttft(loads, works, b_c, b_m):
    """
    Compute end times when every query's tables load after the compute
    micro-batch whose window covers it starts.
    """

    transfer = 0.0
    ends = []

    for j, (load, work) in enumerate(zip(loads, works)):
        window = max(0, (j - b_m) // b_c)
        gate = ends[window * b_c - 1] if window else 0.0
        transfer = max(transfer, gate) + load
        ends.append(max(ends[-1] if ends else 0.0, transfer) + work)

    return ends

def test_overlapped_total_is_cold_load_plus_compute():

    # Two fresh tables of 8 tokens per query: load 4, compute 17
    cost = CostModel(compute_per_token=0.5, load_per_token=0.25, switch_overhead=0)
    counts = { t: 8 for t in range(16) }

    queries = [
        query(j, [ 2 * j, 2 * j + 1 ], 16, query_len=2) for j in range(8)
    ]
    plan = schedule(queries, b_c=3, b_m=2)

    assert plan.window == [0, 0, 0, 0, 0, 1, 1, 1]

    r = simulate(plan, cost, TieredCache(16, backend(counts)))

    expected = [ 4.0 + 17.0 * (j + 1) for j in range(8) ]

    assert r.ttft == pytest.approx(expected)
    assert r.ttft == pytest.approx(max_plus_ttft([4.0] * 8, [17.0] * 8, 3, 2))
    assert r.serial_baseline_ttft == pytest.approx(21.0 * 36)

    # Queries 3, 4, 6 and 7 load during an earlier micro-batch
    assert (r.misses, r.prefetch_loads) == (8, 8)

    serial = simulate(plan, cost, TieredCache(16, backend(counts)), mode=SERIAL)

    assert serial.ttft == pytest.approx([ 21.0 * (j + 1) for j in range(8) ])
    assert (serial.misses, serial.prefetch_loads) == (16, 0)

def test_overlap_matches_max_plus_recurrence():

    rng = random.Random(24)

    for _ in range(200):

        widths = [ rng.randint(1, 3) for _ in range(rng.randint(1, 25)) ]
        m = sum(widths)
        counts = { t: rng.randint(1, 40) for t in range(m) }

        queries = []
        first = 0
        for j, w in enumerate(widths):
            queries.append(query(
                j, range(first, first + w), m, query_len=rng.randint(1, 20),
            ))
            first += w

        cost = CostModel(
            compute_per_token=rng.choice([1e-4, 1e-3, 1e-2]),
            load_per_token=rng.choice([1e-4, 1e-3, 1e-2]),
            switch_overhead=0,
        )

        b_c, b_m = rng.randint(1, 6), rng.randint(1, 6)

        r = simulate(
            schedule(queries, b_c, b_m), cost, TieredCache(m, backend(counts)),
        )

        loads = [
            sum(cost.load(counts[t], False) for t in q.tables)
            for q in queries
        ]
        works = [
            cost.compute(sum(counts[t] for t in q.tables), q.query_len)
            for q in queries
        ]

        assert r.ttft == pytest.approx(
            max_plus_ttft(loads, works, b_c, b_m), rel=1e-9,
        )

        clock = 0.0
        serial = 0.0
        for load, work in zip(loads, works):
            clock += load + work
            serial += clock

        assert r.serial_baseline_ttft == pytest.approx(serial, rel=1e-9)

def test_free_loads_make_modes_equal():

    rng = random.Random(21)
    cost = CostModel(compute_per_token=1e-3, load_per_token=0, switch_overhead=0)
    counts = { t: rng.randint(5, 50) for t in range(10) }

    queries = [ query(i, rng.sample(range(10), 3)) for i in range(40) ]
    plan = schedule(queries, 4, 3)

    r = simulate(plan, cost, TieredCache(4, backend(counts)))

    assert r.total_ttft == pytest.approx(r.serial_baseline_ttft)

def test_capacity_below_widest_query():

    cache = TieredCache(2, backend({ t: 5 for t in range(4) }))
    plan = schedule([ query(0, [0, 1, 2]) ], 1, 1)

    with pytest.raises(CapacityTooSmall):
        simulate(plan, CostModel(), cache)

def test_no_cache_charges_every_access():

    counts = { 0: 10, 1: 10 }
    cost = CostModel(compute_per_token=0, load_per_token=1.0, switch_overhead=2.0)
    plan = schedule([ query(0, [0, 1]), query(1, [0]) ], 1, 1)

    r = simulate(plan, cost, None, mode=SERIAL, backend=backend(counts))

    assert r.misses == 3 and r.swaps == 3 and r.hits == 0
    assert r.transfer_time == 36.0
    assert r.ttft == [24.0, 36.0]

def test_no_cache_needs_backend():
    with pytest.raises(ValueError):
        simulate(schedule([ query(0, [0]) ], 1, 1), CostModel(), None)

def test_prefill_baseline():

    cost = CostModel(compute_per_token=1.0)
    r = prefill_baseline(
        [ query(0, [0], query_len=2), query(1, [], query_len=4) ],
        cost, backend({ 0: 4 }),
    )

    assert r.ttft == [18.0, 26.0]
    assert r.total_ttft == 44.0

def random_instance(rng):

    m = rng.randint(2, 14)
    counts = { t: rng.randint(1, 60) for t in range(m) }

    queries = []
    for i in range(rng.randint(1, 30)):
        width = rng.randint(0, min(m, 4))
        queries.append(query(
            i, rng.sample(range(m), width), m, query_len=rng.randint(1, 30),
        ))

    cost = CostModel(
        compute_per_token=rng.choice([0, 1e-6, 1e-4, 1e-2]),
        load_per_token=rng.choice([0, 1e-5, 1e-4, 1e-2]),
        switch_overhead=rng.choice([0, 1e-3, 5e-2]),
    )

    config = CacheConfig(
        backend=backend(counts),
        capacity=rng.randint(4, m + 2),
        policy=rng.choice([ LRU, FIFO, LFU ]),
    )

    kwargs = dict(
        b_c=rng.randint(1, 8), b_m=rng.randint(1, 8),
        seed=rng.randrange(1000),
    )

    return queries, cost, config, rng.random() < 0.5, kwargs

def test_overlap_dominates_serial_on_random_instances():

    rng = random.Random(22)

    for _ in range(10**3):

        queries, cost, config, rerank_on, kwargs = random_instance(rng)

        cache = config.build()
        events = watch(cache)

        over = run_batch(
            queries, rerank_on, True, config, cost, cache=cache, **kwargs
        )
        serial = run_batch(queries, rerank_on, False, config, cost, **kwargs)

        assert_tables_stay_resident([ queries[i] for i in over.order ], events)

        assert over.total_ttft <= over.serial_baseline_ttft * (1 + 1e-12)
        assert serial.total_ttft == pytest.approx(over.serial_baseline_ttft)
        assert (over.swaps, over.hits) == (serial.swaps, serial.hits)

        # Neither stream can be beaten
        assert over.ttft[-1] >= over.compute_time * (1 - 1e-9)
        assert over.ttft[-1] >= over.transfer_time * (1 - 1e-9)

        at = 0.0
        floor = 0.0
        for i in over.order:
            q = queries[i]
            ctx = sum(config.backend.token_count(t) for t in q.tables)
            at += cost.compute(ctx, q.query_len)
            floor += at

        assert over.total_ttft >= floor * (1 - 1e-9)

def test_simulation_is_deterministic():

    rng = random.Random(23)
    queries, cost, config, _, kwargs = random_instance(rng)

    a = run_batch(queries, True, True, config, cost, **kwargs)
    b = run_batch(queries, True, True, config, cost, **kwargs)

    assert a.to_dict() == b.to_dict()

def test_empty_batch_report():
    r = run_batch([], True, True, CacheConfig(backend({})), CostModel())
    assert r.total_ttft == 0.0 and len(r) == 0

def test_report_rows():

    cache = TieredCache(2, backend({ 0: 3 }))
    r = simulate(schedule([ query(0, [0]), query(1, [0]) ], 1, 1), CostModel(), cache)
    r.label = "full"

    assert [ row["position"] for row in r.rows() ] == [0, 1]
    assert r.rows()[1]["config"] == "full"
    assert r.to_dict()["format_version"] == 1
    assert r.hits == 1

@pytest.fixture(scope="module")
def demo_batch(demo_config):
    engine = Engine(demo_config.cache_dir)
    records = engine.match_workload(load_workload(demo_config.workload))
    return records, engine.backend("file")

def test_demo_queries_match_whole_clusters(demo_batch):
    records, _ = demo_batch
    assert { r.tables for r in records } == {
        frozenset({0, 1, 2, 3}), frozenset({4, 5, 6, 7}),
    }

def test_ablation_ordering_on_demo(demo_batch):

    records, fb = demo_batch

    reports = run_ablations(
        records, CacheConfig(backend=fb, capacity=4), CostModel(),
    )

    totals = [ reports[k].total_ttft for k in (FULL, NO_PIPELINE, NO_RERANK, NO_CACHE) ]

    assert totals == sorted(totals)
    assert totals[0] < totals[-1]

    # Rerank leaves one cluster switch, so only the second fill evicts
    assert reports[FULL].swaps == 4
    assert reports[NO_RERANK].swaps > reports[FULL].swaps
