"""
Runs a workload batch against a precomputed cache: trie matching, optional
rerank, micro-batch schedule and the pipeline simulation.  Prints the
simulated TTFT summary and optionally checks a sample of queries against
full prefill.
"""

import sys

from prometheus_client import Counter, Histogram
from tabulate import tabulate

from ... base import BaseCommand
from ... schema import load_workload, save_report, save_rows
from ... pipeline import CacheConfig, run_batch
from ... exceptions import ConfigError, VerifyFailed
from .. config import RunConfig
from .. engine import Engine, sample_records, verify_records
from .. args import add_config_file_arg, add_corpus_args, add_workload_args
from .. args import add_cache_args, add_pipeline_args, add_verify_args
from .. args import add_report_args

module = ".".join(__name__.split(".")[1:-1])

class Processor(BaseCommand):

    def __init__(self, **params):

        super(Processor, self).__init__(**params)

        self.config = RunConfig.load(params.get("config"), params)
        self.verify = params.get("verify", False)

        if not hasattr(__class__, "cache_metric"):
            __class__.cache_metric = Counter(
                'cache_events', 'Fast tier events',
                ["kind"]
            )

        if not hasattr(__class__, "ttft_metric"):
            __class__.ttft_metric = Histogram(
                'query_ttft', 'Simulated time to first token',
                buckets=[
                    0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0,
                    30.0, 100.0
                ]
            )

        if not hasattr(__class__, "batch_metric"):
            __class__.batch_metric = Histogram(
                'batch_latency', 'Batch simulation wall time, seconds',
            )

    def observe(self, access):

        if access.hit:
            kind = "hit"
        elif access.prefetch:
            kind = "prefetch"
        else:
            kind = "miss"

        __class__.cache_metric.labels(kind=kind).inc()

        if access.evicted is not None:
            __class__.cache_metric.labels(kind="swap").inc()

    def run(self):

        cfg = self.config

        if not cfg.workload:
            raise ConfigError("No workload given")

        engine = Engine(cfg.cache_dir)
        queries = load_workload(cfg.workload)

        print(f"Matching {len(queries)} queries...", flush=True)

        records = engine.match_workload(queries)
        backend = engine.backend(cfg.backend)

        cache_config = CacheConfig(
            backend=backend,
            capacity=cfg.capacity_C,
            policy=cfg.policy,
            management_on=cfg.cache_management_on,
        )

        cache = cache_config.build()
        if cache is not None:
            cache.observer = self.observe

        with __class__.batch_metric.time():
            report = run_batch(
                records, cfg.rerank_on, cfg.pipeline_on, cache_config,
                cfg.cost_model(), b_c=cfg.b_c, b_m=cfg.b_m, seed=cfg.seed,
                fixed_anchor=cfg.fixed_anchor, cache=cache, label="run",
            )

        for t in report.ttft:
            __class__.ttft_metric.observe(t)

        print(tabulate(
            [
                ("queries", len(report)),
                ("mode", report.mode),
                ("total TTFT", report.total_ttft),
                ("serial baseline TTFT", report.serial_baseline_ttft),
                ("hits", report.hits),
                ("misses", report.misses),
                ("swaps", report.swaps),
                ("prefetch loads", report.prefetch_loads),
            ],
            tablefmt="pretty", colalign=("left", "right"),
        ))

        output = {
            "config": cfg.to_dict(),
            "report": report.to_dict(),
        }

        failure = None

        if self.verify and records:

            sample = sample_records(records, cfg.verify_samples, cfg.seed)
            diffs = verify_records(engine, sample, backend)
            worst = max(d for _, d in diffs)
            tolerance = cfg.effective_tolerance(engine.model_config.precision)

            print(
                f"Verified {len(diffs)} queries, max abs diff {worst:.3e} "
                f"(tolerance {tolerance:.1e})",
                flush=True
            )

            output["verify"] = {
                "max_abs_diff": worst,
                "tolerance": tolerance,
                "queries": { q: d for q, d in diffs },
            }

            if worst > tolerance:
                failure = VerifyFailed(worst, tolerance)

        if cfg.report:
            save_report(output, cfg.report)

        if cfg.csv:
            save_rows(report.rows(), cfg.csv)

        if failure:
            raise failure

        print("Done.", flush=True)

    @staticmethod
    def add_args(parser):

        BaseCommand.add_args(parser)

        add_config_file_arg(parser)
        add_corpus_args(parser)
        add_workload_args(parser)
        add_cache_args(parser)
        add_pipeline_args(parser)
        add_verify_args(parser)
        add_report_args(parser)

        parser.add_argument(
            '--verify',
            action='store_true',
            help='Check sampled queries against full prefill',
        )

def run():

    sys.exit(Processor.start(module, __doc__))

