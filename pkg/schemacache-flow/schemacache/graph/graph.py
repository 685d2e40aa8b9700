"""
Primary-foreign-key dependency graph over the tables of a corpus.  Edges run
from the referenced table to the referencing table, so a topological order
puts every table after the tables its foreign keys point at.
"""

import dataclasses
import heapq
import logging

from .. exceptions import DanglingForeignKey, CycleDetected

logger = logging.getLogger(__name__)

STRICT = "strict"
BREAK_CYCLES = "break_cycles"

@dataclasses.dataclass(frozen=True)
class SchemaGraph:
    node_count : int
    # successors[u] = sorted referencing tables of u
    successors : tuple[tuple[int, ...], ...]

    def edges(self):
        return [
            (u, v)
            for u in range(self.node_count)
            for v in self.successors[u]
        ]

    def edge_count(self):
        return sum(len(s) for s in self.successors)

    def predecessors(self):
        preds = [ [] for _ in range(self.node_count) ]
        for u, v in self.edges():
            preds[v].append(u)
        return preds

    def without(self, removed):
        removed = set(removed)
        return SchemaGraph(
            node_count=self.node_count,
            successors=tuple(
                tuple(v for v in succ if (u, v) not in removed)
                for u, succ in enumerate(self.successors)
            )
        )

class TopologicalOrder(list):
    """A list of table ids, plus the edges dropped to make it possible"""

    def __init__(self, order, removed_edges=()):
        super(TopologicalOrder, self).__init__(order)
        self.removed_edges = list(removed_edges)

def build_graph(schemas):

    m = len(schemas)
    ids = { s.table_id for s in schemas }

    if ids != set(range(m)):
        raise DanglingForeignKey("Table ids must be dense from 0")

    succ = [ set() for _ in range(m) ]

    for s in schemas:
        for fk in s.foreign_keys:

            if fk.ref_table not in ids:
                raise DanglingForeignKey(
                    f"{s.name}.{fk.column} references unknown table "
                    f"{fk.ref_table}"
                )

            # Self-references say nothing about cross-table attention
            if fk.ref_table == s.table_id: continue

            succ[fk.ref_table].add(s.table_id)

    graph = SchemaGraph(
        node_count=m,
        successors=tuple(tuple(sorted(s)) for s in succ),
    )

    logger.debug(f"Schema graph: {m} tables, {graph.edge_count()} edges")

    return graph

def _kahn(graph):

    indeg = [0] * graph.node_count
    for u, v in graph.edges():
        indeg[v] += 1

    # Lowest ready table id first
    ready = [ u for u in range(graph.node_count) if indeg[u] == 0 ]
    heapq.heapify(ready)

    order = []

    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in graph.successors[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)

    return order

def _find_cycle(graph, placed):

    remaining = set(range(graph.node_count)) - set(placed)
    preds = graph.predecessors()

    # Every unplaced node has an unplaced predecessor, walk those back
    node = min(remaining)
    seen = {}
    path = []

    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        node = min(p for p in preds[node] if p in remaining)

    cycle = path[seen[node]:]
    cycle.reverse()

    start = cycle.index(min(cycle))
    return cycle[start:] + cycle[:start]

def _back_edges(graph):
    """Back edges of an iterative DFS, in discovery order"""

    WHITE, GREY, BLACK = 0, 1, 2
    colour = [WHITE] * graph.node_count
    back = []

    for root in range(graph.node_count):

        if colour[root] != WHITE: continue

        colour[root] = GREY
        stack = [ (root, iter(graph.successors[root])) ]

        while stack:

            u, it = stack[-1]
            v = next(it, None)

            if v is None:
                colour[u] = BLACK
                stack.pop()
            elif colour[v] == GREY:
                back.append((u, v))
            elif colour[v] == WHITE:
                colour[v] = GREY
                stack.append((v, iter(graph.successors[v])))

    return back

def topological_order(graph, mode=STRICT):

    if mode not in (STRICT, BREAK_CYCLES):
        raise ValueError(f"Unknown topological sort mode {mode}")

    removed = []

    if mode == BREAK_CYCLES:

        reduced = graph

        while True:
            back = _back_edges(reduced)
            if not back: break
            edge = back[-1]
            logger.info(f"Breaking foreign key cycle at edge {edge}")
            removed.append(edge)
            reduced = reduced.without([edge])

        return TopologicalOrder(_kahn(reduced), removed)

    order = _kahn(graph)

    if len(order) < graph.node_count:
        raise CycleDetected(_find_cycle(graph, order))

    return TopologicalOrder(order)

