"""
Checks assembled table caches against the block-masked full prefill for a
sample of workload queries and reports the max abs difference.
"""

import sys

from tabulate import tabulate

from ... base import BaseCommand
from ... schema import load_workload, save_report
from ... exceptions import ConfigError, VerifyFailed
from .. config import RunConfig, FILE_BACKEND, MEMORY_BACKEND
from .. engine import Engine, sample_records, verify_records
from .. args import add_config_file_arg, add_corpus_args, add_workload_args
from .. args import add_verify_args, add_report_args

module = ".".join(__name__.split(".")[1:-1])

class Processor(BaseCommand):

    def __init__(self, **params):

        super(Processor, self).__init__(**params)

        self.config = RunConfig.load(params.get("config"), params)

    def run(self):

        cfg = self.config

        if not cfg.workload:
            raise ConfigError("No workload given")

        engine = Engine(cfg.cache_dir)
        backend = engine.backend(cfg.backend)

        records = engine.match_workload(load_workload(cfg.workload))
        sample = sample_records(records, cfg.verify_samples, cfg.seed)

        print(f"Verifying {len(sample)} queries...", flush=True)

        diffs = verify_records(engine, sample, backend)

        worst = max((d for _, d in diffs), default=0.0)
        tolerance = cfg.effective_tolerance(engine.model_config.precision)

        print(tabulate(
            [ (q, f"{d:.3e}") for q, d in diffs ],
            headers=["query", "max abs diff"],
            tablefmt="pretty",
        ))

        print(
            f"Max abs diff {worst:.3e}, tolerance {tolerance:.1e}",
            flush=True
        )

        if cfg.report:
            save_report(
                {
                    "config": cfg.to_dict(),
                    "verify": {
                        "max_abs_diff": worst,
                        "tolerance": tolerance,
                        "queries": { q: d for q, d in diffs },
                    },
                },
                cfg.report
            )

        if worst > tolerance:
            raise VerifyFailed(worst, tolerance)

        print("Done.", flush=True)

    @staticmethod
    def add_args(parser):

        BaseCommand.add_args(parser)

        add_config_file_arg(parser)
        add_corpus_args(parser)
        add_workload_args(parser)
        add_verify_args(parser)
        add_report_args(parser)

        parser.add_argument(
            '--backend',
            choices=[ FILE_BACKEND, MEMORY_BACKEND ],
            help=f'Slow tier backend (default: {FILE_BACKEND})',
        )

        parser.add_argument(
            '--seed',
            type=int,
            help='Sampling seed (default: 0)',
        )

def run():

    sys.exit(Processor.start(module, __doc__))

