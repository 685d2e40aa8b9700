"""
Runtime growth of trie matching, reranking and the graph pass as the input
doubles.  Best of several runs, ratios only.
"""

import random

import pytest

from schemacache.trie import build_trie
from schemacache.rerank import rerank
from schemacache.graph import build_graph, topological_order
from schemacache.cli.bench import best_time, growth, random_records

from conftest import table

@pytest.mark.slow
def test_match_all_runtime_is_linear():

    rng = random.Random(500)

    serials = {
        t: [ rng.randrange(500) for _ in range(rng.randint(20, 60)) ]
        for t in range(50)
    }
    trie = build_trie(serials)

    stream = []
    while len(stream) < 40_000:
        stream.extend(serials[rng.randrange(50)])
        stream.extend(rng.randrange(500) for _ in range(5))

    times = [
        best_time(lambda: trie.match_all(stream[:n]), repeats=5)
        for n in (10_000, 20_000, 40_000)
    ]

    assert max(growth(times)) <= 2.5

@pytest.mark.slow
def test_rerank_runtime_is_quadratic():

    batches = [ random_records(size, 64, seed=1) for size in (256, 512, 1024) ]

    times = [
        best_time(lambda: rerank(records, fixed_anchor=True), repeats=3)
        for records in batches
    ]

    assert max(growth(times)) <= 5.0

def sparse_corpus(rng, m):
    """Each table references at most one table of lower id"""
    return [
        table(t, [ rng.randrange(t) ] if t and rng.random() < 0.5 else [])
        for t in range(m)
    ]

@pytest.mark.slow
def test_graph_pass_is_near_linear():

    rng = random.Random(600)
    corpora = [ sparse_corpus(rng, m) for m in (2000, 4000, 8000) ]

    def graph_pass(schemas):
        topological_order(build_graph(schemas))

    times = [
        best_time(lambda: graph_pass(schemas), repeats=3)
        for schemas in corpora
    ]

    assert max(growth(times)) <= 3.0
