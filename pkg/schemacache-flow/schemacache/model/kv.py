"""
Position-free per-table KV blocks and their on-disk form: one
<table_id>.kv file per table, a little-endian u32 header followed by
layer-major, token-major float32 keys then values.
"""

import dataclasses
import os
import struct

import numpy as np
import torch

from .. exceptions import FormatError, DimensionMismatch

HEADER = struct.Struct("<6I")

@dataclasses.dataclass
class TableKV:
    table_id : int
    token_count : int
    # [layers, tokens, heads, head_dim], keys stored without rotation
    keys : torch.Tensor
    values : torch.Tensor
    local_offset : int = 0

    def __post_init__(self):
        if self.keys.shape != self.values.shape:
            raise DimensionMismatch(
                f"Table {self.table_id}: key shape {tuple(self.keys.shape)} "
                f"!= value shape {tuple(self.values.shape)}"
            )
        if self.keys.dim() != 4 or self.keys.shape[1] != self.token_count:
            raise DimensionMismatch(
                f"Table {self.table_id}: bad KV shape "
                f"{tuple(self.keys.shape)} for {self.token_count} tokens"
            )

    @property
    def num_layers(self):
        return self.keys.shape[0]

    @property
    def num_heads(self):
        return self.keys.shape[2]

    @property
    def head_dim(self):
        return self.keys.shape[3]

    def to(self, dtype):
        return dataclasses.replace(
            self, keys=self.keys.to(dtype), values=self.values.to(dtype),
        )

def kv_filename(table_id):
    return f"{table_id}.kv"

def encode_table_kv(kv):

    header = HEADER.pack(
        kv.table_id, kv.token_count, kv.num_layers, kv.num_heads,
        kv.head_dim, kv.local_offset,
    )

    def body(t):
        return t.detach().to(torch.float32).contiguous().numpy().astype("<f4")

    return header + body(kv.keys).tobytes() + body(kv.values).tobytes()

def decode_table_kv(data):

    if len(data) < HEADER.size:
        raise FormatError("KV blob shorter than its header")

    table_id, tokens, layers, heads, dim, offset = HEADER.unpack_from(data)

    shape = (layers, tokens, heads, dim)
    count = layers * tokens * heads * dim

    if len(data) != HEADER.size + 8 * count:
        raise FormatError(
            f"KV blob for table {table_id} has {len(data)} bytes, expected "
            f"{HEADER.size + 8 * count}"
        )

    arr = np.frombuffer(data, dtype="<f4", offset=HEADER.size)

    keys = torch.from_numpy(arr[:count].reshape(shape).copy())
    values = torch.from_numpy(arr[count:].reshape(shape).copy())

    return TableKV(
        table_id=table_id, token_count=tokens, keys=keys, values=values,
        local_offset=offset,
    )

def write_table_kv(kv, directory):
    path = os.path.join(directory, kv_filename(kv.table_id))
    with open(path, "wb") as f:
        f.write(encode_table_kv(kv))
    return path

def read_table_kv(path):
    with open(path, "rb") as f:
        return decode_table_kv(f.read())

