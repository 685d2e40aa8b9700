"""
The whole batch path: optional rerank, schedule, simulate.  Four ablation
configurations switch off the pipeline, the reranker or cache management.
"""

import dataclasses
import logging

from .. cache import TieredCache, LRU
from .. rerank import rerank
from . schedule import schedule, default_b_c, default_b_m
from . simulate import simulate, SimReport, OVERLAPPED, SERIAL

logger = logging.getLogger(__name__)

default_capacity = 4

FULL = "full"
NO_PIPELINE = "w/o pipeline"
NO_RERANK = "w/o rerank"
NO_CACHE = "w/o cache management"

@dataclasses.dataclass
class CacheConfig:
    backend : object
    capacity : int = default_capacity
    policy : str = LRU
    management_on : bool = True

    def build(self):
        if not self.management_on: return None
        return TieredCache(self.capacity, self.backend, self.policy)

@dataclasses.dataclass(frozen=True)
class Ablation:
    label : str
    rerank_on : bool
    pipeline_on : bool
    management_on : bool

ABLATIONS = [
    Ablation(FULL, True, True, True),
    Ablation(NO_PIPELINE, True, False, True),
    Ablation(NO_RERANK, False, True, True),
    Ablation(NO_CACHE, False, False, False),
]

def run_batch(
        queries, rerank_on, pipeline_on, cache_config, cost_model,
        b_c=default_b_c, b_m=default_b_m, seed=0, fixed_anchor=False,
        cache=None, label=None,
):
    """
    A fresh cache is built from cache_config unless one is passed in.
    """

    mode = OVERLAPPED if pipeline_on else SERIAL

    if not queries:
        return SimReport(mode=mode, label=label)

    if rerank_on:
        order = rerank(queries, seed=seed, fixed_anchor=fixed_anchor)
    else:
        order = list(range(len(queries)))

    if cache is None:
        cache = cache_config.build()

    resident = cache.resident() if cache is not None else ()

    plan = schedule(
        [queries[i] for i in order], b_c=b_c, b_m=b_m, resident=resident,
    )

    report = simulate(
        plan, cost_model, cache, mode=mode, backend=cache_config.backend,
    )

    report.order = order
    report.label = label

    logger.info(
        f"Batch {label or mode}: {len(queries)} queries, "
        f"total TTFT {report.total_ttft:.6g}, swaps {report.swaps}"
    )

    return report

def run_ablations(queries, cache_config, cost_model, **kwargs):
    """label -> SimReport for each ablation configuration"""

    reports = {}

    for a in ABLATIONS:
        config = dataclasses.replace(cache_config, management_on=a.management_on)
        reports[a.label] = run_batch(
            queries, a.rerank_on, a.pipeline_on, config, cost_model,
            label=a.label, **kwargs
        )

    return reports

