
import os
import random

import pytest

from schemacache.schema import TableSchema, ColumnDef, ForeignKey
from schemacache.cli import make_demo, RunConfig, precompute_corpus

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SHIPPED_DEMO = os.path.join(REPO, "demo")

def table(table_id, refs=(), name=None):
    """Table with an id column and one foreign key column per ref"""

    refs = sorted(set(refs))

    return TableSchema(
        table_id=table_id,
        name=name or f"t{table_id}",
        columns=(
            [ ColumnDef("id", "row id", is_primary_key=True) ] +
            [ ColumnDef(f"ref{r}", f"points at t{r}") for r in refs ]
        ),
        foreign_keys=[ ForeignKey(f"ref{r}", r, "id") for r in refs ],
    )

def random_dag(rng, m, density=0.2):
    """Tables whose foreign keys only point at tables earlier in a shuffle"""

    rank = list(range(m))
    rng.shuffle(rank)

    refs = { t: [] for t in range(m) }
    for i in range(m):
        for j in range(i):
            if rng.random() < density:
                refs[rank[i]].append(rank[j])

    return [ table(t, refs[t]) for t in range(m) ]

@pytest.fixture
def rng():
    return random.Random(1234)

@pytest.fixture(scope="session")
def demo_assets(tmp_path_factory):
    out = tmp_path_factory.mktemp("demo")
    return make_demo(str(out))

@pytest.fixture(scope="session")
def demo_config(demo_assets, tmp_path_factory):
    """Run configuration over a precomputed copy of the demo corpus"""

    corpus, workload = demo_assets

    cfg = RunConfig(
        schema=corpus,
        workload=workload,
        cache_dir=str(tmp_path_factory.mktemp("cache") / "demo"),
    )

    precompute_corpus(cfg)

    return cfg

def random_groups(rng, group_count, vocab, sizes=(1, 4), lengths=(20, 80)):
    """Encoding plan over random token tables, and table_id -> tokens"""

    from schemacache.graph import EncodingPlan

    groups = []
    tokens = {}

    for _ in range(group_count):
        group = []
        for _ in range(rng.randint(*sizes)):
            t = len(tokens)
            tokens[t] = [
                rng.randrange(vocab) for _ in range(rng.randint(*lengths))
            ]
            group.append(t)
        groups.append(group)

    plan = EncodingPlan.from_dict({ "groups": groups })

    return plan.with_lengths({ t: len(v) for t, v in tokens.items() }), tokens

def encode_all(model, plan, tokens):

    from schemacache.model import encode_group

    kvs = {}
    for group in plan.groups:
        for kv in encode_group(model, [ (t, tokens[t]) for t in group ]):
            kvs[kv.table_id] = kv

    return kvs

def group_permutation(rng, plan):
    """Whole groups shuffled, tables inside each kept in plan order"""
    groups = list(plan.groups)
    rng.shuffle(groups)
    return [ t for g in groups for t in g ]

def oracle_for(model, plan, tokens, order, query=()):

    from schemacache.model import BlockMask, QUERY_GROUP, prefill_oracle

    flat = [ tok for t in order for tok in tokens[t] ]
    groups = [ plan.group_of[t] for t in order for _ in tokens[t] ]
    groups += [ QUERY_GROUP ] * len(query)

    mask = BlockMask(groups=groups, positions=range(len(groups)))

    return prefill_oracle(model, flat + list(query), mask)

def max_diff(a, b):
    if a.numel() == 0: return 0.0
    return float((a - b).abs().max())
