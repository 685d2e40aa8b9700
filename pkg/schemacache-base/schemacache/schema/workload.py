"""
Workload files, JSON Lines, one query per line.
"""

import json
import logging

from jsonschema import validate, ValidationError

from . types import WorkloadQuery, FORMAT_VERSION
from .. exceptions import ParseError, FormatError

logger = logging.getLogger(__name__)

query_schema = {
    "type": "object",
    "properties": {
        "format_version": { "type": "integer" },
        "query_id": { "type": [ "string", "integer" ] },
        "text": { "type": "string" },
    },
    "required": [ "query_id", "text" ],
    "additionalProperties": False,
}

def parse_workload(lines):

    queries = []

    for n, line in enumerate(lines, start=1):

        if not line.strip(): continue

        try:
            obj = json.loads(line)
            validate(instance=obj, schema=query_schema)
        except (json.JSONDecodeError, ValidationError) as e:
            msg = getattr(e, "message", str(e))
            raise ParseError(f"Workload line {n}: {msg}")

        version = obj.get("format_version", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            raise FormatError(
                f"Workload line {n}: format_version {version} not supported"
            )

        queries.append(WorkloadQuery.from_dict(obj))

    return queries

def load_workload(path):

    with open(path, "r") as f:
        queries = parse_workload(f)

    logger.info(f"Loaded {len(queries)} queries from {path}")

    return queries

def save_workload(queries, path):
    with open(path, "w") as f:
        for q in queries:
            f.write(json.dumps(q.to_dict()) + "\n")

