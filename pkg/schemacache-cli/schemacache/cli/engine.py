"""
Offline precomputation of a schema corpus into a cache directory, and the
engine that loads one back: tokenizer, table trie, encoding plan, model
and slow-tier backend.
"""

import json
import logging
import os
import random
import shutil
import tempfile

from .. schema import load_corpus, FORMAT_VERSION
from .. graph import plan_encoding, EncodingPlan, STRICT, BREAK_CYCLES
from .. trie import build_trie
from .. model import ModelConfig, ToyTransformer, encode_group, assemble
from .. model import write_table_kv, kv_filename, prefill_oracle
from .. model import query_attend, context_order, group_closure
from .. cache import FileBackend, MemoryBackend
from .. rerank import QueryRecord
from .. exceptions import ConfigError, MissingCacheDir, FormatError
from . tokenizer import Tokenizer
from . serialize import serialize_corpus
from . config import MEMORY_BACKEND

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"

def precompute_corpus(config, on_group=None):
    """
    Writes <table_id>.kv files and the manifest into config.cache_dir.
    Output is built in a temporary sibling directory and moved into place
    only once complete.  on_group(group, kvs) is called per encoded group.
    """

    if not config.schema:
        raise ConfigError("No schema corpus given")

    schemas = load_corpus(config.schema)
    texts = serialize_corpus(schemas)

    tokenizer = Tokenizer.build(texts[t] for t in sorted(texts))
    tokens = { t: tokenizer.encode(text) for t, text in texts.items() }

    plan = plan_encoding(
        schemas,
        mode=BREAK_CYCLES if config.break_cycles else STRICT,
        pfk_grouping=config.pfk_grouping,
        lengths={ t: len(v) for t, v in tokens.items() },
    )

    # Rejects empty and duplicate serializations before any encoding
    build_trie(tokens)

    model_config = ModelConfig(
        vocab_size=tokenizer.vocab_size,
        weight_seed=config.seed,
        precision=config.precision,
    )
    model = ToyTransformer(model_config)

    target = os.path.abspath(config.cache_dir)
    parent = os.path.dirname(target)
    os.makedirs(parent, exist_ok=True)

    work = tempfile.mkdtemp(prefix=".precompute-", dir=parent)

    try:

        for group in plan.groups:

            kvs = encode_group(model, [ (t, tokens[t]) for t in group ])

            for kv in kvs:
                write_table_kv(kv, work)

            if on_group:
                on_group(group, kvs)

        names = { s.table_id: s.name for s in schemas }

        manifest = {
            "format_version": FORMAT_VERSION,
            "model": model_config.to_dict(),
            "tokenizer": tokenizer.to_dict(),
            "plan": plan.to_dict(),
            "pfk_grouping": config.pfk_grouping,
            "break_cycles": config.break_cycles,
            "tables": [
                {
                    "table_id": t,
                    "name": names[t],
                    "file": kv_filename(t),
                    "text": texts[t],
                    "tokens": tokens[t],
                }
                for t in sorted(texts)
            ],
        }

        with open(os.path.join(work, MANIFEST), "w") as f:
            json.dump(manifest, f, indent=1, sort_keys=True)
            f.write("\n")

    except BaseException:
        shutil.rmtree(work, ignore_errors=True)
        raise

    # The previous cache is only removed once the new one is in place
    old = None

    if os.path.exists(target):
        old = tempfile.mkdtemp(prefix=".replaced-", dir=parent)
        os.rmdir(old)
        os.rename(target, old)

    try:
        os.rename(work, target)
    except BaseException:
        if old: os.rename(old, target)
        shutil.rmtree(work, ignore_errors=True)
        raise

    if old:
        shutil.rmtree(old, ignore_errors=True)

    logger.info(f"Precomputed {len(texts)} tables into {target}")

    return target

def read_manifest(directory):

    path = os.path.join(directory, MANIFEST)

    if not os.path.isfile(path):
        raise MissingCacheDir(
            f"{directory} holds no precomputed cache, run precompute first"
        )

    try:
        with open(path) as f:
            manifest = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f"Manifest {path} does not parse: {e}")

    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"Manifest format version {version} not supported")

    return manifest

class Engine:

    def __init__(self, directory):

        manifest = read_manifest(directory)

        self.directory = directory
        self.manifest = manifest

        self.tokenizer = Tokenizer.from_dict(manifest["tokenizer"])

        if self.tokenizer.digest() != manifest["tokenizer"]["digest"]:
            raise FormatError("Tokenizer digest does not match its pieces")

        self.model_config = ModelConfig.from_dict(manifest["model"])
        self.plan = EncodingPlan.from_dict(manifest["plan"])

        self.tables = {
            t["table_id"]: t for t in manifest["tables"]
        }
        self.tokens = {
            t: entry["tokens"] for t, entry in self.tables.items()
        }

        self.trie = build_trie(
            self.tokens,
            handles={ t: entry["file"] for t, entry in self.tables.items() },
        )

        self._model = None

    def __len__(self):
        return len(self.tables)

    @property
    def model(self):
        if self._model is None:
            self._model = ToyTransformer(self.model_config)
        return self._model

    def backend(self, kind):
        """
        File backend reads the .kv blobs; memory backend re-encodes every
        group in model precision.
        """

        if kind != MEMORY_BACKEND:
            return FileBackend(self.directory)

        kvs = []
        for group in self.plan.groups:
            kvs.extend(encode_group(
                self.model, [ (t, self.tokens[t]) for t in group ]
            ))

        return MemoryBackend(kvs)

    def match(self, query):

        tokens = self.tokenizer.encode(query.text)
        spans = self.trie.match_all(tokens)

        return QueryRecord.create(
            query.query_id, tokens, { s.table_id for s in spans },
            len(self.tables),
            query_len=len(tokens) - sum(len(s) for s in spans),
        )

    def match_workload(self, queries):
        return [ self.match(q) for q in queries ]

    def question_tokens(self, record):
        """Prompt tokens left once matched tables are cut out"""

        keep = [True] * len(record.tokens)
        for s in self.trie.match_all(record.tokens):
            keep[s.start:s.end] = [False] * len(s)

        return [ t for t, k in zip(record.tokens, keep) if k ]

    def verify(self, record, backend):
        """
        Max abs difference between the assembled context plus query prefill
        and the block-masked full prefill, over the record's tables closed
        over their encoding groups.
        """

        model = self.model

        order = group_closure(
            self.plan, context_order(self.plan, sorted(record.tables))
        )

        ctx = assemble(
            model, self.plan, { t: backend.load(t) for t in order }, order,
        )

        question = self.question_tokens(record)

        tokens = [ tok for t in order for tok in self.tokens[t] ]

        if not tokens and not question:
            return 0.0

        oracle = prefill_oracle(
            model, tokens + question, ctx.block_mask(len(question)),
        )

        n = ctx.total_tokens

        diffs = [
            (ctx.keys - oracle.keys[:, :n]).abs().max() if n else None,
            (ctx.values - oracle.values[:, :n]).abs().max() if n else None,
        ]

        if question:
            hidden = query_attend(model, ctx, question)
            diffs.append((hidden - oracle.hidden[n:]).abs().max())

        diffs = [ float(d) for d in diffs if d is not None ]

        return max(diffs, default=0.0)

def sample_records(records, count, seed=0):
    """count records chosen by seed, in workload order; 0 means all"""

    if count == 0 or count >= len(records):
        return list(records)

    picks = sorted(random.Random(seed).sample(range(len(records)), count))

    return [ records[i] for i in picks ]

def verify_records(engine, records, backend):
    """[(query_id, max abs diff), ...]"""

    out = []

    for record in records:
        diff = engine.verify(record, backend)
        logger.debug(f"Verified {record.query_id}: {diff:.3e}")
        out.append((record.query_id, diff))

    return out

