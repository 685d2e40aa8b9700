"""
Command-line flags for run configuration keys.  Every flag defaults to None
so that a config file value is only overridden by a flag actually given.
"""

import argparse

from . config import RunConfig, FILE_BACKEND, MEMORY_BACKEND, tolerances
from .. cache import POLICIES

defaults = RunConfig()

def add_config_file_arg(parser):

    parser.add_argument(
        '-c', '--config',
        help='YAML or JSON run configuration file',
    )

def add_corpus_args(parser):

    parser.add_argument(
        '-s', '--schema',
        help='Schema corpus JSON file',
    )

    parser.add_argument(
        '-d', '--cache-dir',
        help=f'Precomputed cache directory (default: {defaults.cache_dir})',
    )

def add_workload_args(parser):

    parser.add_argument(
        '-w', '--workload',
        help='Workload JSON Lines file',
    )

def add_precompute_args(parser):

    parser.add_argument(
        '--precision',
        choices=sorted(tolerances),
        help=f'Model precision (default: {defaults.precision})',
    )

    parser.add_argument(
        '--seed',
        type=int,
        help=f'Model weight and rerank anchor seed (default: {defaults.seed})',
    )

    parser.add_argument(
        '--break-cycles',
        action=argparse.BooleanOptionalAction,
        help='Drop back edges of foreign key cycles (default: false)',
    )

    parser.add_argument(
        '--pfk-grouping',
        action=argparse.BooleanOptionalAction,
        help='Encode foreign-key-linked tables together (default: true)',
    )

def add_cache_args(parser):

    parser.add_argument(
        '-C', '--capacity',
        dest='capacity_C',
        type=int,
        help=f'Fast tier capacity in tables (default: {defaults.capacity_C})',
    )

    parser.add_argument(
        '--policy',
        choices=sorted(POLICIES),
        help=f'Eviction policy (default: {defaults.policy})',
    )

    parser.add_argument(
        '--backend',
        choices=[ FILE_BACKEND, MEMORY_BACKEND ],
        help=f'Slow tier backend (default: {defaults.backend})',
    )

    parser.add_argument(
        '--cache-management',
        dest='cache_management_on',
        action=argparse.BooleanOptionalAction,
        help='Keep tables resident in the fast tier (default: true)',
    )

def add_pipeline_args(parser):

    parser.add_argument(
        '--b-c',
        dest='b_c',
        type=int,
        help=f'Compute micro-batch size (default: {defaults.b_c})',
    )

    parser.add_argument(
        '--b-m',
        dest='b_m',
        type=int,
        help=f'Prefetch lookahead in queries (default: {defaults.b_m})',
    )

    parser.add_argument(
        '--compute-per-token',
        type=float,
        help=f'Compute cost per attended token '
        f'(default: {defaults.compute_per_token})',
    )

    parser.add_argument(
        '--load-per-token',
        type=float,
        help=f'Load cost per cached token (default: {defaults.load_per_token})',
    )

    parser.add_argument(
        '--switch-overhead',
        type=float,
        help=f'Cost per eviction swap (default: {defaults.switch_overhead})',
    )

    parser.add_argument(
        '--rerank',
        dest='rerank_on',
        action=argparse.BooleanOptionalAction,
        help='Reorder queries for cache reuse (default: true)',
    )

    parser.add_argument(
        '--pipeline',
        dest='pipeline_on',
        action=argparse.BooleanOptionalAction,
        help='Overlap loading with compute (default: true)',
    )

    parser.add_argument(
        '--fixed-anchor',
        action=argparse.BooleanOptionalAction,
        help='Start reranking at the first query (default: false)',
    )

    parser.add_argument(
        '--seed',
        type=int,
        help=f'Rerank anchor seed (default: {defaults.seed})',
    )

def add_verify_args(parser):

    parser.add_argument(
        '--verify-samples',
        type=int,
        help=f'Queries checked against full prefill, 0 for all '
        f'(default: {defaults.verify_samples})',
    )

    parser.add_argument(
        '--tolerance',
        type=float,
        help='Max abs difference allowed (default: 1e-5, or 1e-10 for '
        'float64 with the memory backend)',
    )

def add_report_args(parser):

    parser.add_argument(
        '-o', '--report',
        help='JSON report output file',
    )

    parser.add_argument(
        '--csv',
        help='Per-query CSV output file',
    )

