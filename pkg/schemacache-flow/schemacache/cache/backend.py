"""
Slow-tier backends: the whole precomputed corpus, either held in memory or
read from <table_id>.kv files on demand.
"""

import logging
import os

import torch

from .. model.kv import TableKV, HEADER, kv_filename, read_table_kv
from .. exceptions import UnknownTable, MissingCacheDir

logger = logging.getLogger(__name__)

class MemoryBackend:

    def __init__(self, kvs):
        if not isinstance(kvs, dict):
            kvs = { kv.table_id: kv for kv in kvs }
        self.kvs = dict(kvs)

    def __contains__(self, table_id):
        return table_id in self.kvs

    def table_ids(self):
        return sorted(self.kvs)

    def token_count(self, table_id):
        return self.load(table_id).token_count

    def load(self, table_id):
        try:
            return self.kvs[table_id]
        except KeyError:
            raise UnknownTable(f"Table {table_id} was never precomputed")

    @staticmethod
    def placeholder(token_counts):
        """Token-sized empty blocks, for simulations that never read KV"""

        return MemoryBackend({
            t: TableKV(
                table_id=t, token_count=n,
                keys=torch.zeros(1, n, 1, 2), values=torch.zeros(1, n, 1, 2),
            )
            for t, n in token_counts.items()
        })

class FileBackend:

    def __init__(self, directory):

        if not os.path.isdir(directory):
            raise MissingCacheDir(f"Cache directory {directory} not found")

        self.directory = directory
        self.counts = {}

        for name in sorted(os.listdir(directory)):
            stem, ext = os.path.splitext(name)
            if ext != ".kv" or not stem.isdigit(): continue
            with open(os.path.join(directory, name), "rb") as f:
                header = HEADER.unpack(f.read(HEADER.size))
            self.counts[int(stem)] = header[1]

        logger.info(f"File backend: {len(self.counts)} tables in {directory}")

    def __contains__(self, table_id):
        return table_id in self.counts

    def table_ids(self):
        return sorted(self.counts)

    def token_count(self, table_id):
        try:
            return self.counts[table_id]
        except KeyError:
            raise UnknownTable(f"Table {table_id} was never precomputed")

    def load(self, table_id):
        if table_id not in self.counts:
            raise UnknownTable(f"Table {table_id} was never precomputed")
        return read_table_kv(
            os.path.join(self.directory, kv_filename(table_id))
        )

