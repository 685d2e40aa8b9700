"""
Greedy nearest-neighbour query reordering over table-incidence vectors.
"""

import dataclasses
import logging

import numpy as np

from . incidence import IncidenceVector, incidence, popcount

logger = logging.getLogger(__name__)

@dataclasses.dataclass
class QueryRecord:
    query_id : str
    tokens : list[int]
    tables : frozenset
    incidence : IncidenceVector
    # Prompt tokens outside matched tables, defaults to all of them
    query_len : int | None = None

    def __post_init__(self):
        self.tables = frozenset(self.tables)
        if self.query_len is None:
            self.query_len = len(self.tokens)

    @staticmethod
    def create(query_id, tokens, tables, n, query_len=None):
        return QueryRecord(
            query_id=query_id, tokens=list(tokens), tables=tables,
            incidence=incidence(tables, n), query_len=query_len,
        )

def chain_cost(queries, order):
    """Sum of Hamming distances between consecutive queries"""

    if len(order) < 2: return 0

    words = np.stack([queries[i].incidence.words for i in order])

    return int(popcount(words[1:] ^ words[:-1]).sum())

def rerank(queries, seed=0, fixed_anchor=False):
    """
    Start from a seeded random anchor (index 0 of the matched queries with
    fixed_anchor) and repeatedly append the closest unvisited query, lowest
    index on ties.  Queries that matched no table come last in their
    original order.
    """

    if not queries:
        return []

    matched = [i for i, q in enumerate(queries) if q.tables]
    unmatched = [i for i, q in enumerate(queries) if not q.tables]

    if not matched:
        return unmatched

    words = np.stack([queries[i].incidence.words for i in matched])
    n = len(matched)

    if fixed_anchor:
        current = 0
    else:
        current = int(np.random.default_rng(seed).integers(n))

    visited = np.zeros(n, dtype=bool)
    order = [current]
    visited[current] = True

    # Larger than any real distance
    far = words.shape[1] * 64 + 1

    for _ in range(n - 1):

        dist = popcount(words ^ words[current]).sum(axis=1).astype(np.int64)
        dist[visited] = far

        current = int(np.argmin(dist))
        visited[current] = True
        order.append(current)

    logger.debug(
        f"Reranked {len(queries)} queries, anchor {matched[order[0]]}, "
        f"{len(unmatched)} without tables"
    )

    return [matched[i] for i in order] + unmatched

