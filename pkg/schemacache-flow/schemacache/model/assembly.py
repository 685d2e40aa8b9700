"""
Offline group encoding, online assembly of position-free table blocks at
global positions, and the block-masked full-prefill oracle the assembly is
checked against.
"""

import dataclasses
import logging

import torch

from . kv import TableKV
from .. trie import MatchSpan
from .. exceptions import EmptyGroup, MissingTableKV, GroupOrderViolation
from .. exceptions import DimensionMismatch

logger = logging.getLogger(__name__)

# Tokens in this group see every earlier token
QUERY_GROUP = -1

@dataclasses.dataclass(frozen=True)
class BlockMask:
    groups : tuple[int, ...]
    positions : tuple[int, ...]

    def __post_init__(self):

        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "positions", tuple(self.positions))

        if len(self.groups) != len(self.positions):
            raise DimensionMismatch(
                f"{len(self.groups)} group ids for "
                f"{len(self.positions)} positions"
            )

        for a, b in zip(self.positions, self.positions[1:]):
            if b <= a:
                raise ValueError("Mask positions must strictly increase")

    def __len__(self):
        return len(self.groups)

    def allowed(self):
        """[tokens, tokens] bool: i may attend j"""

        n = len(self.groups)
        g = torch.tensor(self.groups, dtype=torch.long)

        causal = torch.ones(n, n, dtype=torch.bool).tril()
        same = g.unsqueeze(1) == g.unsqueeze(0)
        sees_all = (g == QUERY_GROUP).unsqueeze(1)

        return causal & (same | sees_all)

    @staticmethod
    def from_lengths(group_lengths, query_len=0, start=0):
        """Consecutive blocks of the given lengths, then query tokens"""

        groups = []
        for ix, n in enumerate(group_lengths):
            groups.extend([ix] * n)
        groups.extend([QUERY_GROUP] * query_len)

        return BlockMask(
            groups=groups,
            positions=range(start, start + len(groups)),
        )

@dataclasses.dataclass
class AssembledContext:
    # [layers, tokens, heads, head_dim], keys rotated at global positions
    keys : torch.Tensor
    values : torch.Tensor
    total_tokens : int
    spans : list
    # Encoding group of every context token
    token_groups : tuple[int, ...]

    def table_order(self):
        return [ s.table_id for s in self.spans ]

    def block_mask(self, query_len=0):
        return BlockMask(
            groups=self.token_groups + (QUERY_GROUP,) * query_len,
            positions=range(self.total_tokens + query_len),
        )

def encode_group(model, tables):
    """
    tables: [(table_id, tokens), ...] in encoding plan order.  Runs causal
    prefill over the whole group at local positions and returns one
    unrotated TableKV per table.
    """

    if len(tables) == 0:
        raise EmptyGroup("Encoding group has no tables")

    tokens = []
    spans = []

    for table_id, toks in tables:
        if len(toks) == 0:
            raise EmptyGroup(f"Table {table_id} has no tokens")
        spans.append((table_id, len(tokens), len(tokens) + len(toks)))
        tokens.extend(toks)

    positions = list(range(len(tokens)))
    mask = BlockMask(groups=[0] * len(tokens), positions=positions)

    res = model.forward(tokens, positions, mask.allowed())

    # Undo the local rotation, one stored block serves any global offset
    keys = model.rotate(res.keys, [-p for p in positions])

    return [
        TableKV(
            table_id=table_id,
            token_count=end - start,
            keys=keys[:, start:end].clone(),
            values=res.values[:, start:end].clone(),
            local_offset=start,
        )
        for table_id, start, end in spans
    ]

def check_group_order(plan, order):
    """
    Tables of one group must sit together, in plan order, or relative
    positions inside the group change.
    """

    seen_tables = set()
    closed_groups = set()
    current = None
    last_rank = -1

    for t in order:

        if t in seen_tables:
            raise GroupOrderViolation(f"Table {t} appears twice")
        seen_tables.add(t)

        g = plan.group_of[t]
        rank = plan.position_in_group(t)

        if g != current:
            if g in closed_groups:
                raise GroupOrderViolation(
                    f"Group {g} is split by another group at table {t}"
                )
            if current is not None:
                closed_groups.add(current)
            current = g
            last_rank = -1

        if rank <= last_rank:
            raise GroupOrderViolation(
                f"Table {t} appears out of order within group {g}"
            )

        last_rank = rank

def assemble(model, plan, table_kvs, order):

    if not isinstance(table_kvs, dict):
        table_kvs = { kv.table_id: kv for kv in table_kvs }

    for t in order:
        if t not in table_kvs:
            raise MissingTableKV(f"No KV cache for table {t}")

    check_group_order(plan, order)

    cfg = model.config
    keys = []
    values = []
    spans = []
    token_groups = []
    at = 0

    for t in order:

        kv = table_kvs[t].to(model.dtype)
        n = kv.token_count

        keys.append(model.rotate(kv.keys, range(at, at + n)))
        values.append(kv.values)
        spans.append(MatchSpan(t, at, at + n))
        token_groups.extend([plan.group_of[t]] * n)

        at += n

    if keys:
        keys = torch.cat(keys, dim=1)
        values = torch.cat(values, dim=1)
    else:
        keys = torch.zeros(
            cfg.num_layers, 0, cfg.num_heads, cfg.head_dim, dtype=model.dtype
        )
        values = keys.clone()

    logger.debug(f"Assembled {len(order)} tables, {at} tokens")

    return AssembledContext(
        keys=keys, values=values, total_tokens=at, spans=spans,
        token_groups=tuple(token_groups),
    )

def prefill_oracle(model, tokens, mask):

    if len(tokens) != len(mask):
        raise DimensionMismatch(
            f"Mask covers {len(mask)} tokens, input has {len(tokens)}"
        )

    return model.forward(tokens, mask.positions, mask.allowed())

def query_attend(model, ctx, query_tokens):
    """
    Prefill of the query only: its tokens follow the context, see every
    context token and each other causally.  Returns [query, hidden].
    """

    qlen = len(query_tokens)
    n = ctx.total_tokens

    if qlen == 0:
        return torch.zeros(0, model.config.hidden_dim, dtype=model.dtype)

    positions = list(range(n, n + qlen))

    allowed = torch.cat(
        [
            torch.ones(qlen, n, dtype=torch.bool),
            torch.ones(qlen, qlen, dtype=torch.bool).tril(),
        ],
        dim=1
    )

    x = model.embed(query_tokens)

    for layer in range(model.config.num_layers):

        q, k, v = model.qkv(x, layer)
        q = model.rotate(q, positions)
        k = model.rotate(k, positions)

        k_all = torch.cat([ctx.keys[layer], k], dim=0)
        v_all = torch.cat([ctx.values[layer], v], dim=0)

        x = model.finish_block(x, model.attend(q, k_all, v_all, allowed), layer)

    return x

def context_order(plan, table_ids):
    """
    Assembly order for matched tables: groups in order of first appearance,
    plan order inside each group.
    """

    wanted = dict.fromkeys(table_ids)
    groups = dict.fromkeys(plan.group_of[t] for t in wanted)

    return [
        t
        for g in groups
        for t in plan.groups[g]
        if t in wanted
    ]

def group_closure(plan, table_ids):
    """Every table of every group touched by table_ids, in context order"""

    groups = dict.fromkeys(plan.group_of[t] for t in table_ids)

    return [ t for g in groups for t in plan.groups[g] ]

