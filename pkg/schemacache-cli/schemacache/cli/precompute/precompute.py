"""
Precomputes position-free KV caches for every table of a schema corpus,
one <table_id>.kv file per table plus the manifest the other commands
load.
"""

import sys

from prometheus_client import Counter, Histogram

from ... base import BaseCommand
from .. config import RunConfig
from .. engine import precompute_corpus
from .. args import add_config_file_arg, add_corpus_args, add_precompute_args

module = ".".join(__name__.split(".")[1:-1])

class Processor(BaseCommand):

    def __init__(self, **params):

        super(Processor, self).__init__(**params)

        self.config = RunConfig.load(params.get("config"), params)

        if not hasattr(__class__, "tables_metric"):
            __class__.tables_metric = Counter(
                'tables_encoded', 'Tables encoded into the cache'
            )

        if not hasattr(__class__, "group_metric"):
            __class__.group_metric = Histogram(
                'group_size', 'Tables per encoding group',
                buckets=[1, 2, 3, 4, 6, 8, 12, 16, 32, 64]
            )

    def on_group(self, group, kvs):

        tokens = sum(kv.token_count for kv in kvs)
        print(
            f"Encoded group {list(group)}, {tokens} tokens", flush=True
        )

        __class__.tables_metric.inc(len(kvs))
        __class__.group_metric.observe(len(group))

    def run(self):

        print(
            f"Precomputing {self.config.schema} into "
            f"{self.config.cache_dir}...",
            flush=True
        )

        precompute_corpus(self.config, self.on_group)

        print("Done.", flush=True)

    @staticmethod
    def add_args(parser):

        BaseCommand.add_args(parser)

        add_config_file_arg(parser)
        add_corpus_args(parser)
        add_precompute_args(parser)

def run():

    sys.exit(Processor.start(module, __doc__))

