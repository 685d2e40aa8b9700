"""
Schema corpus files.  Either a bare JSON array of tables, or an object
{"format_version": 1, "tables": [...]}.
"""

import json
import logging

from jsonschema import validate, ValidationError

from . types import TableSchema, FORMAT_VERSION
from .. exceptions import ParseError, FormatError, DanglingForeignKey

logger = logging.getLogger(__name__)

table_schema = {
    "type": "object",
    "properties": {
        "table_id": { "type": "integer", "minimum": 0 },
        "name": { "type": "string", "minLength": 1 },
        "columns": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": { "type": "string", "minLength": 1 },
                    "description": { "type": "string" },
                    "is_primary_key": { "type": "boolean" },
                },
                "required": [ "name" ],
                "additionalProperties": False,
            },
        },
        "foreign_keys": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "column": { "type": "string" },
                    "ref_table": { "type": "integer", "minimum": 0 },
                    "ref_column": { "type": "string" },
                },
                "required": [ "column", "ref_table", "ref_column" ],
                "additionalProperties": False,
            },
        },
    },
    "required": [ "table_id", "name", "columns" ],
    "additionalProperties": False,
}

corpus_schema = {
    "oneOf": [
        { "type": "array", "items": table_schema },
        {
            "type": "object",
            "properties": {
                "format_version": { "type": "integer" },
                "tables": { "type": "array", "items": table_schema },
            },
            "required": [ "format_version", "tables" ],
            "additionalProperties": False,
        },
    ]
}

def parse_corpus(obj):

    try:
        validate(instance=obj, schema=corpus_schema)
    except ValidationError as e:
        raise ParseError(f"Schema corpus invalid: {e.message}")

    if isinstance(obj, dict):
        if obj["format_version"] != FORMAT_VERSION:
            raise FormatError(
                f"Schema corpus format_version {obj['format_version']} "
                f"not supported (expected {FORMAT_VERSION})"
            )
        tables = obj["tables"]
    else:
        tables = obj

    try:
        schemas = [ TableSchema.from_dict(t) for t in tables ]
    except ValueError as e:
        raise ParseError(str(e))

    check_corpus(schemas)

    return sorted(schemas, key=lambda s: s.table_id)

def check_corpus(schemas):
    """Ids must be dense 0..m-1 and every foreign key must resolve."""

    ids = sorted(s.table_id for s in schemas)

    if ids != list(range(len(schemas))):
        raise ParseError("Table ids must be unique and dense from 0")

    by_id = { s.table_id: s for s in schemas }

    for s in schemas:
        for fk in s.foreign_keys:
            ref = by_id.get(fk.ref_table)
            if ref is None:
                raise DanglingForeignKey(
                    f"{s.name}.{fk.column} references unknown table "
                    f"{fk.ref_table}"
                )
            if ref.column(fk.ref_column) is None:
                raise DanglingForeignKey(
                    f"{s.name}.{fk.column} references unknown column "
                    f"{ref.name}.{fk.ref_column}"
                )

def load_corpus(path):

    try:
        with open(path, "r") as f:
            obj = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}")

    schemas = parse_corpus(obj)

    logger.info(f"Loaded {len(schemas)} tables from {path}")

    return schemas

def save_corpus(schemas, path):
    with open(path, "w") as f:
        json.dump(
            {
                "format_version": FORMAT_VERSION,
                "tables": [ s.to_dict() for s in schemas ],
            },
            f, indent=2
        )

