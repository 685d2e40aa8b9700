"""
Token-keyed trie over table serializations.  Terminals carry the table id
and an opaque cache handle.  match_all extracts table occurrences from a
prompt by repeated longest-prefix queries, advancing one token on a miss.
"""

import dataclasses
import logging

from .. exceptions import DuplicateTable, EmptySerialization
from .. exceptions import DuplicateSerialization

logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class MatchSpan:
    table_id : int
    start : int
    end : int

    def __len__(self):
        return self.end - self.start

@dataclasses.dataclass(frozen=True)
class QueryResult:
    found : bool
    next : int
    table_id : int | None = None
    cache_handle : object = None

MISS = QueryResult(found=False, next=-1)

class TableTrie:

    def __init__(self):
        # Node 0 is the root
        self._children = [ {} ]
        self._terminal = [ None ]
        self._lengths = {}
        self._handles = {}

    def __len__(self):
        return len(self._lengths)

    def __contains__(self, table_id):
        return table_id in self._lengths

    @property
    def node_count(self):
        return len(self._children)

    def serialization_length(self, table_id):
        return self._lengths[table_id]

    def insert(self, tokens, table_id, cache_handle=None):

        tokens = list(tokens)

        if len(tokens) == 0:
            raise EmptySerialization(f"Table {table_id} has no tokens")

        if table_id in self._lengths:
            raise DuplicateTable(f"Table {table_id} already inserted")

        node = 0
        for t in tokens:
            nxt = self._children[node].get(t)
            if nxt is None:
                nxt = len(self._children)
                self._children[node][t] = nxt
                self._children.append({})
                self._terminal.append(None)
            node = nxt

        if self._terminal[node] is not None:
            raise DuplicateSerialization(
                f"Table {table_id} has the same serialization as table "
                f"{self._terminal[node][0]}"
            )

        self._terminal[node] = (table_id, cache_handle)
        self._lengths[table_id] = len(tokens)
        self._handles[table_id] = cache_handle

        return self

    def query(self, tokens, start):

        if start < 0 or start >= len(tokens):
            return MISS

        children = self._children
        terminal = self._terminal

        node = 0
        best = None
        best_end = -1

        for pos in range(start, len(tokens)):
            node = children[node].get(tokens[pos])
            if node is None: break
            if terminal[node] is not None:
                best = terminal[node]
                best_end = pos + 1

        if best is None:
            return MISS

        return QueryResult(
            found=True, next=best_end,
            table_id=best[0], cache_handle=best[1],
        )

    def match_all(self, tokens):

        spans = []
        p = 0
        n = len(tokens)

        while p < n:
            res = self.query(tokens, p)
            if res.found:
                spans.append(MatchSpan(res.table_id, p, res.next))
                p = res.next
            else:
                p += 1

        logger.debug(f"Matched {len(spans)} tables in {n} tokens")

        return spans

    def handle(self, table_id):
        return self._handles[table_id]

    def paths(self):
        """Every (table_id, token path) pair held by the trie"""

        out = []
        stack = [ (0, []) ]

        while stack:
            node, path = stack.pop()
            if self._terminal[node] is not None:
                out.append((self._terminal[node][0], path))
            for tok, child in self._children[node].items():
                stack.append((child, path + [tok]))

        return sorted(out)

def build_trie(serializations, handles=None):
    """serializations: table_id -> token list"""

    trie = TableTrie()

    for table_id in sorted(serializations):
        handle = handles.get(table_id) if handles else None
        trie.insert(serializations[table_id], table_id, handle)

    logger.info(f"Table trie: {len(trie)} tables, {trie.node_count} nodes")

    return trie

