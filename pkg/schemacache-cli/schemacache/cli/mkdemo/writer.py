"""
Writes the demo schema corpus and clustered workload.
"""

import argparse
import sys

from ... base import BaseCommand
from .. demo import make_demo, default_query_count

module = ".".join(__name__.split(".")[1:-1])

default_output = "demo"

class Processor(BaseCommand):

    def __init__(self, **params):

        super(Processor, self).__init__(**params)

        self.output = params.get("output", default_output)
        self.seed = params.get("seed", 0)
        self.shuffle_tables = params.get("shuffle_tables", False)
        self.queries = params.get("queries", default_query_count)

    def run(self):

        corpus, workload = make_demo(
            self.output, seed=self.seed, shuffle_tables=self.shuffle_tables,
            count=self.queries,
        )

        print(f"Wrote {corpus} and {workload}", flush=True)

    @staticmethod
    def add_args(parser):

        BaseCommand.add_args(parser)

        parser.add_argument(
            '-O', '--output',
            default=default_output,
            help=f'Output directory (default: {default_output})',
        )

        parser.add_argument(
            '--seed',
            type=int,
            default=0,
            help='Table shuffle seed (default: 0)',
        )

        parser.add_argument(
            '--shuffle-tables',
            action=argparse.BooleanOptionalAction,
            default=False,
            help='Randomise table order inside each prompt (default: false)',
        )

        parser.add_argument(
            '-n', '--queries',
            type=int,
            default=default_query_count,
            help=f'Queries to write (default: {default_query_count})',
        )

def run():

    sys.exit(Processor.start(module, __doc__))

