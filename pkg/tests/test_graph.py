
import random

import pytest

from schemacache.schema import TableSchema, ColumnDef, ForeignKey
from schemacache.graph import build_graph, topological_order, encoding_groups
from schemacache.graph import plan_encoding, STRICT, BREAK_CYCLES
from schemacache.exceptions import DanglingForeignKey, CycleDetected

from conftest import table, random_dag

def graph_of(m, edges):
    """Graph with the given referenced -> referencing edges"""
    refs = { t: [] for t in range(m) }
    for u, v in edges:
        refs[v].append(u)
    return build_graph([ table(t, refs[t]) for t in range(m) ])

def has_cycle(m, edges):

    adj = { u: [] for u in range(m) }
    for u, v in edges:
        adj[u].append(v)

    state = [0] * m

    def visit(u):
        state[u] = 1
        for v in adj[u]:
            if state[v] == 1: return True
            if state[v] == 0 and visit(v): return True
        state[u] = 2
        return False

    return any(state[u] == 0 and visit(u) for u in range(m))

def components(m, edges):

    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)

    out = {}
    for t in range(m):
        out.setdefault(find(t), set()).add(t)

    return { frozenset(c) for c in out.values() }

def test_single_table_is_isolated_node():
    g = build_graph([ table(0) ])
    assert g.node_count == 1
    assert g.edges() == []

def test_edge_runs_from_referenced_table():

    schools = TableSchema(0, "schools", [ ColumnDef("CDSCode", "", True) ])
    satscores = TableSchema(
        1, "satscores",
        [ ColumnDef("cds", "school code"), ColumnDef("NumTstTakr") ],
        [ ForeignKey("cds", 0, "CDSCode") ],
    )

    assert build_graph([ schools, satscores ]).edges() == [ (0, 1) ]

def test_edges_match_foreign_key_scan():

    rng = random.Random(7)

    for _ in range(20):

        schemas = random_dag(rng, 10, 0.3)

        expected = {
            (fk.ref_table, s.table_id)
            for s in schemas
            for fk in s.foreign_keys
        }

        assert set(build_graph(schemas).edges()) == expected

def test_repeated_foreign_keys_collapse():

    t1 = TableSchema(
        1, "orders",
        [ ColumnDef("buyer"), ColumnDef("seller") ],
        [ ForeignKey("buyer", 0, "id"), ForeignKey("seller", 0, "id") ],
    )

    g = build_graph([ table(0), t1 ])

    assert g.edges() == [ (0, 1) ]

def test_self_reference_adds_no_edge():

    t = TableSchema(
        0, "staff", [ ColumnDef("id"), ColumnDef("manager") ],
        [ ForeignKey("manager", 0, "id") ],
    )

    assert build_graph([ t ]).edge_count() == 0

def test_dangling_foreign_key():

    t = TableSchema(
        1, "orders", [ ColumnDef("id"), ColumnDef("customer") ],
        [ ForeignKey("customer", 5, "id") ],
    )

    with pytest.raises(DanglingForeignKey):
        build_graph([ table(0), t ])

def test_topological_order_of_singleton():
    assert topological_order(build_graph([ table(0) ])) == [ 0 ]

def test_topological_order_respects_edges():

    edges = [ (0, 1), (0, 2), (1, 3) ]
    order = topological_order(graph_of(4, edges))

    assert sorted(order) == [ 0, 1, 2, 3 ]
    for u, v in edges:
        assert order.index(u) < order.index(v)

def test_ready_tables_lowest_id_first():
    order = topological_order(graph_of(4, [ (3, 0) ]))
    assert order == [ 1, 2, 3, 0 ]

def test_two_cycle_strict():

    with pytest.raises(CycleDetected) as e:
        topological_order(graph_of(2, [ (0, 1), (1, 0) ]))

    assert e.value.cycle == [ 0, 1 ]

def test_three_cycle_reported_in_edge_direction():

    with pytest.raises(CycleDetected) as e:
        topological_order(graph_of(4, [ (0, 1), (1, 2), (2, 0), (2, 3) ]))

    assert e.value.cycle == [ 0, 1, 2 ]

def test_strict_succeeds_iff_acyclic():

    rng = random.Random(11)

    for _ in range(200):

        m = rng.randint(1, 8)
        edges = {
            (u, v)
            for u in range(m) for v in range(m)
            if u != v and rng.random() < 0.15
        }

        g = graph_of(m, edges)

        if has_cycle(m, edges):
            with pytest.raises(CycleDetected):
                topological_order(g, STRICT)
        else:
            order = topological_order(g, STRICT)
            for u, v in edges:
                assert order.index(u) < order.index(v)

def test_break_cycles_reports_removed_edges():

    rng = random.Random(5)

    for _ in range(100):

        m = rng.randint(2, 8)
        edges = {
            (u, v)
            for u in range(m) for v in range(m)
            if u != v and rng.random() < 0.3
        }

        order = topological_order(graph_of(m, edges), BREAK_CYCLES)
        kept = edges - set(order.removed_edges)

        assert sorted(order) == list(range(m))
        assert set(order.removed_edges) <= edges
        assert not has_cycle(m, kept)
        assert bool(order.removed_edges) == has_cycle(m, edges)

        for u, v in kept:
            assert order.index(u) < order.index(v)

def test_isolated_tables_form_singleton_groups():
    g = graph_of(3, [])
    plan = encoding_groups(g, topological_order(g))
    assert plan.groups == ((0,), (1,), (2,))

def test_components_split_into_groups():
    g = graph_of(3, [ (0, 1) ])
    plan = encoding_groups(g, topological_order(g))
    assert plan.groups == ((0, 1), (2,))
    assert plan.group_of == { 0: 0, 1: 0, 2: 1 }

def test_groups_match_union_find():

    rng = random.Random(3)

    for _ in range(30):

        schemas = random_dag(rng, 20, 0.08)
        g = build_graph(schemas)
        plan = encoding_groups(g, topological_order(g))

        assert { frozenset(grp) for grp in plan.groups } == \
            components(20, g.edges())

        for u, v in g.edges():
            grp = plan.group_tables(u)
            assert grp.index(u) < grp.index(v)

        assert sorted(t for grp in plan.groups for t in grp) == \
            list(range(20))

def test_offsets_contiguous_per_group():

    schemas = [ table(0), table(1, [0]), table(2, [1]), table(3) ]
    lengths = { 0: 5, 1: 7, 2: 3, 3: 4 }

    plan = plan_encoding(schemas, lengths=lengths)

    assert plan.groups == ((0, 1, 2), (3,))
    assert plan.offsets == { 0: 0, 1: 5, 2: 12, 3: 0 }

def test_singleton_plan_ignores_foreign_keys():

    schemas = [ table(0), table(1, [0]), table(2, [1]) ]

    plan = plan_encoding(schemas, pfk_grouping=False)

    assert plan.groups == ((0,), (1,), (2,))

def test_plan_survives_dict_round_trip():

    schemas = [ table(0), table(1, [0]), table(2) ]
    plan = plan_encoding(schemas, lengths={ 0: 3, 1: 4, 2: 5 })

    again = type(plan).from_dict(plan.to_dict())

    assert again == plan
