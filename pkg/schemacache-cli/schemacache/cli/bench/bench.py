"""
Benchmarks a workload against a precomputed cache.  Reports simulated TTFT
for the four ablation configurations, the full-prefill baseline and the
speedups over both, optionally per eviction policy and the runtime scaling
of trie matching and reranking.
"""

import random
import sys
import time

from tabulate import tabulate

from ... base import BaseCommand
from ... schema import load_workload, save_report
from ... pipeline import CacheConfig, run_batch, run_ablations
from ... pipeline import prefill_baseline, ABLATIONS, FULL, NO_CACHE
from ... cache import POLICIES
from ... rerank import QueryRecord, rerank
from ... exceptions import ConfigError
from .. config import RunConfig
from .. engine import Engine
from .. args import add_config_file_arg, add_corpus_args, add_workload_args
from .. args import add_cache_args, add_pipeline_args, add_report_args

module = ".".join(__name__.split(".")[1:-1])

match_lengths = [ 10_000, 20_000, 40_000 ]
rerank_sizes = [ 256, 512, 1024 ]

def best_time(fn, repeats=3):
    best = None
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best

def growth(times):
    """Runtime ratio for each doubling of the input"""
    return [ b / a if a > 0 else float("inf") for a, b in zip(times, times[1:]) ]

def match_input(engine, length):
    """Table serializations back to back, cut to length tokens"""

    tokens = []
    ids = sorted(engine.tokens)

    while len(tokens) < length:
        for t in ids:
            tokens.extend(engine.tokens[t])

    return tokens[:length]

def random_records(count, n, seed):

    rng = random.Random(seed)

    return [
        QueryRecord.create(
            f"r{i}", [], rng.sample(range(n), rng.randint(1, min(n, 8))), n,
        )
        for i in range(count)
    ]

def ordering_holds(reports):
    """full <= w/o pipeline <= w/o rerank <= w/o cache management"""
    totals = [ reports[a.label].total_ttft for a in ABLATIONS ]
    return all(a <= b for a, b in zip(totals, totals[1:]))

class Processor(BaseCommand):

    def __init__(self, **params):

        super(Processor, self).__init__(**params)

        self.config = RunConfig.load(params.get("config"), params)
        self.policies = params.get("policies", False)
        self.scaling = params.get("scaling", False)

    def cache_config(self, backend, policy=None):
        return CacheConfig(
            backend=backend,
            capacity=self.config.capacity_C,
            policy=policy or self.config.policy,
        )

    def batch_args(self):
        cfg = self.config
        return {
            "b_c": cfg.b_c, "b_m": cfg.b_m, "seed": cfg.seed,
            "fixed_anchor": cfg.fixed_anchor,
        }

    def run(self):

        cfg = self.config

        if not cfg.workload:
            raise ConfigError("No workload given")

        engine = Engine(cfg.cache_dir)
        backend = engine.backend(cfg.backend)
        records = engine.match_workload(load_workload(cfg.workload))
        cost = cfg.cost_model()

        print(f"Benchmarking {len(records)} queries...", flush=True)

        reports = run_ablations(
            records, self.cache_config(backend), cost, **self.batch_args()
        )

        baseline = prefill_baseline(records, cost, backend)

        full = reports[FULL].total_ttft

        def speedup(total):
            return total / full if full > 0 else float("inf")

        print(tabulate(
            [
                (
                    label, r.total_ttft, r.hits, r.misses, r.swaps,
                    r.prefetch_loads,
                )
                for label, r in reports.items()
            ] + [
                (baseline.mode, baseline.total_ttft, "", "", "", ""),
            ],
            headers=[
                "config", "total TTFT", "hits", "misses", "swaps",
                "prefetch",
            ],
            tablefmt="pretty",
        ))

        holds = ordering_holds(reports)

        print(
            f"Speedup over {NO_CACHE}: "
            f"{speedup(reports[NO_CACHE].total_ttft):.2f}x, "
            f"over full prefill: {speedup(baseline.total_ttft):.2f}x",
            flush=True
        )
        print(f"Ablation ordering holds: {'yes' if holds else 'no'}")

        output = {
            "config": cfg.to_dict(),
            "ablations": {
                label: r.summary() for label, r in reports.items()
            },
            "prefill_baseline": baseline.summary(),
            "speedup": speedup(reports[NO_CACHE].total_ttft),
            "prefill_speedup": speedup(baseline.total_ttft),
            "ordering_holds": holds,
        }

        if self.policies:
            output["policies"] = self.compare_policies(records, backend, cost)

        if self.scaling:
            output["scaling"] = self.measure_scaling(engine)

        if cfg.report:
            save_report(output, cfg.report)

        print("Done.", flush=True)

    def compare_policies(self, records, backend, cost):

        results = {}

        for policy in sorted(POLICIES):
            r = run_batch(
                records, True, True, self.cache_config(backend, policy),
                cost, label=policy, **self.batch_args()
            )
            results[policy] = r.summary()

        print(tabulate(
            [
                (p, r["total_ttft"], r["swaps"])
                for p, r in results.items()
            ],
            headers=["policy", "total TTFT", "swaps"],
            tablefmt="pretty",
        ))

        return results

    def measure_scaling(self, engine):

        match_times = [
            best_time(lambda: engine.trie.match_all(tokens))
            for tokens in [ match_input(engine, n) for n in match_lengths ]
        ]

        n = len(engine)

        rerank_times = [
            best_time(lambda: rerank(records, fixed_anchor=True), repeats=1)
            for records in [
                random_records(size, n, self.config.seed)
                for size in rerank_sizes
            ]
        ]

        print(tabulate(
            list(zip(match_lengths, match_times)) +
            list(zip(rerank_sizes, rerank_times)),
            headers=["input size", "seconds"],
            tablefmt="pretty",
        ))

        return {
            "match_all": {
                "lengths": match_lengths,
                "seconds": match_times,
                "growth": growth(match_times),
            },
            "rerank": {
                "sizes": rerank_sizes,
                "seconds": rerank_times,
                "growth": growth(rerank_times),
            },
        }

    @staticmethod
    def add_args(parser):

        BaseCommand.add_args(parser)

        add_config_file_arg(parser)
        add_corpus_args(parser)
        add_workload_args(parser)
        add_cache_args(parser)
        add_pipeline_args(parser)
        add_report_args(parser)

        parser.add_argument(
            '--policies',
            action='store_true',
            help='Compare eviction policies on the full system',
        )

        parser.add_argument(
            '--scaling',
            action='store_true',
            help='Measure trie matching and rerank runtime growth',
        )

def run():

    sys.exit(Processor.start(module, __doc__))

