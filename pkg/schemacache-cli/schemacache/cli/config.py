"""
Run configuration.  Built-in defaults, then an optional YAML or JSON file,
then command-line flags, each overriding the one before.  Validated before
any work is done.
"""

import dataclasses
import logging
import os

from jsonschema import validate, ValidationError
from yaml import load, SafeLoader, YAMLError

from .. exceptions import ConfigError
from .. cache import POLICIES
from .. pipeline import CostModel
from .. pipeline import default_compute_per_token, default_load_per_token
from .. pipeline import default_switch_overhead

logger = logging.getLogger(__name__)

FILE_BACKEND = "file"
MEMORY_BACKEND = "memory"

default_cache_dir = os.getenv("SCHEMACACHE_CACHE_DIR", "schema-cache")

tolerances = {
    "float32": 1e-5,
    "float64": 1e-10,
}

config_schema = {
    "type": "object",
    "properties": {
        "schema": { "type": ["string", "null"] },
        "workload": { "type": ["string", "null"] },
        "cache_dir": { "type": "string", "minLength": 1 },
        "capacity_C": { "type": "integer", "minimum": 1 },
        "policy": { "enum": sorted(POLICIES) },
        "b_c": { "type": "integer", "minimum": 1 },
        "b_m": { "type": "integer", "minimum": 1 },
        "compute_per_token": { "type": "number", "minimum": 0 },
        "load_per_token": { "type": "number", "minimum": 0 },
        "switch_overhead": { "type": "number", "minimum": 0 },
        "rerank_on": { "type": "boolean" },
        "pipeline_on": { "type": "boolean" },
        "cache_management_on": { "type": "boolean" },
        "fixed_anchor": { "type": "boolean" },
        "seed": { "type": "integer", "minimum": 0 },
        "precision": { "enum": sorted(tolerances) },
        "tolerance": { "type": ["number", "null"], "exclusiveMinimum": 0 },
        "verify_samples": { "type": "integer", "minimum": 0 },
        "report": { "type": ["string", "null"] },
        "csv": { "type": ["string", "null"] },
        "break_cycles": { "type": "boolean" },
        "pfk_grouping": { "type": "boolean" },
        "backend": { "enum": [ FILE_BACKEND, MEMORY_BACKEND ] },
    },
    "additionalProperties": False,
}

@dataclasses.dataclass(frozen=True)
class RunConfig:
    schema : str | None = None
    workload : str | None = None
    cache_dir : str = default_cache_dir
    capacity_C : int = 4
    policy : str = "lru"
    b_c : int = 100
    b_m : int = 10
    compute_per_token : float = default_compute_per_token
    load_per_token : float = default_load_per_token
    switch_overhead : float = default_switch_overhead
    rerank_on : bool = True
    pipeline_on : bool = True
    cache_management_on : bool = True
    fixed_anchor : bool = False
    seed : int = 0
    precision : str = "float32"
    tolerance : float | None = None
    verify_samples : int = 8
    report : str | None = None
    csv : str | None = None
    break_cycles : bool = False
    pfk_grouping : bool = True
    backend : str = FILE_BACKEND

    @staticmethod
    def keys():
        return [ f.name for f in dataclasses.fields(RunConfig) ]

    @staticmethod
    def load(path=None, overrides=None):
        """
        overrides: flag values, None meaning not given.  Keys that are not
        config keys are ignored there, so parsed argument dicts pass as-is.
        """

        values = {}

        if path:
            values.update(read_config_file(path))

        if overrides:
            keys = set(RunConfig.keys())
            values.update({
                k: v for k, v in overrides.items()
                if k in keys and v is not None
            })

        check_config(values)

        cfg = RunConfig(**values)

        logger.debug(f"Configuration: {cfg}")

        return cfg

    def effective_tolerance(self, precision=None):
        """
        .kv files hold 32-bit floats whatever the model precision.  Pass
        the precision the cache was built with, which overrides ours.
        """
        if self.tolerance is not None: return self.tolerance
        if self.backend == FILE_BACKEND: return tolerances["float32"]
        return tolerances[precision or self.precision]

    def cost_model(self):
        return CostModel(
            compute_per_token=self.compute_per_token,
            load_per_token=self.load_per_token,
            switch_overhead=self.switch_overhead,
        )

    def to_dict(self):
        return dataclasses.asdict(self)

def read_config_file(path):

    try:
        with open(path) as f:
            values = load(f, Loader=SafeLoader)
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}")
    except YAMLError as e:
        raise ConfigError(f"Config file {path} does not parse: {e}")

    if values is None:
        return {}

    if not isinstance(values, dict):
        raise ConfigError(f"Config file {path} must hold a mapping")

    return values

def check_config(values):
    try:
        validate(instance=values, schema=config_schema)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e.message}")

