"""
Encoding plans: which tables are encoded together offline, in which order,
and at which local token offset inside their group.
"""

import dataclasses
import logging

from . graph import build_graph, topological_order, STRICT

logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class EncodingPlan:
    groups : tuple[tuple[int, ...], ...]
    group_of : dict
    # table_id -> local token offset, empty until lengths are known
    offsets : dict = dataclasses.field(default_factory=dict)

    def group_tables(self, table_id):
        return self.groups[self.group_of[table_id]]

    def position_in_group(self, table_id):
        return self.group_tables(table_id).index(table_id)

    def with_lengths(self, lengths):
        """Fills per-table local offsets from table token counts"""

        offsets = {}
        for group in self.groups:
            at = 0
            for t in group:
                offsets[t] = at
                at += lengths[t]

        return dataclasses.replace(self, offsets=offsets)

    def to_dict(self):
        return {
            "groups": [ list(g) for g in self.groups ],
            "offsets": { str(t): o for t, o in sorted(self.offsets.items()) },
        }

    @staticmethod
    def from_dict(d):
        groups = tuple(tuple(g) for g in d["groups"])
        return EncodingPlan(
            groups=groups,
            group_of=_group_index(groups),
            offsets={ int(t): o for t, o in d.get("offsets", {}).items() },
        )

def _group_index(groups):
    return {
        t: ix
        for ix, group in enumerate(groups)
        for t in group
    }

class _DisjointSet:

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

def encoding_groups(graph, order):

    if sorted(order) != list(range(graph.node_count)):
        raise ValueError("Order must list every table exactly once")

    ds = _DisjointSet(graph.node_count)
    for u, v in graph.edges():
        ds.union(u, v)

    groups = {}

    # Groups appear in the order their first table appears
    for t in order:
        groups.setdefault(ds.find(t), []).append(t)

    groups = tuple(tuple(g) for g in groups.values())

    return EncodingPlan(groups=groups, group_of=_group_index(groups))

def singleton_plan(order):
    """Every table encoded on its own, foreign keys ignored"""
    groups = tuple((t,) for t in order)
    return EncodingPlan(groups=groups, group_of=_group_index(groups))

def plan_encoding(schemas, mode=STRICT, pfk_grouping=True, lengths=None):

    graph = build_graph(schemas)
    order = topological_order(graph, mode)

    if pfk_grouping:
        plan = encoding_groups(graph.without(order.removed_edges), order)
    else:
        plan = singleton_plan(order)

    if lengths is not None:
        plan = plan.with_lengths(lengths)

    logger.info(
        f"Encoding plan: {len(plan.groups)} groups over "
        f"{graph.node_count} tables"
    )

    return plan

