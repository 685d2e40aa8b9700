
class SchemaCacheError(Exception):
    pass

class ConfigError(SchemaCacheError):
    pass

class DataError(SchemaCacheError):
    pass

class ParseError(DataError):
    pass

class FormatError(DataError):
    pass

# Schema graph

class DanglingForeignKey(DataError):
    pass

class CycleDetected(DataError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super(CycleDetected, self).__init__(
            f"Foreign key cycle: {' -> '.join(str(t) for t in self.cycle)}"
        )

# Table trie

class DuplicateTable(DataError):
    pass

class EmptySerialization(DataError):
    pass

class DuplicateSerialization(DataError):
    pass

# Attention core

class EmptyGroup(DataError):
    pass

class DimensionMismatch(DataError):
    pass

class MissingTableKV(DataError):
    pass

class GroupOrderViolation(DataError):
    pass

# KV store

class UnknownTable(DataError):
    pass

class CacheNotFull(DataError):
    pass

class CapacityTooSmall(DataError):
    pass

# Reranker

class TableIdOutOfRange(DataError):
    pass

class LengthMismatch(DataError):
    pass

# Pipeline

class EmptyBatch(DataError):
    pass

# Commands

class MissingCacheDir(DataError):
    pass

class VerifyFailed(SchemaCacheError):
    def __init__(self, diff, tolerance):
        self.diff = diff
        self.tolerance = tolerance
        super(VerifyFailed, self).__init__(
            f"Max abs diff {diff:.3e} exceeds tolerance {tolerance:.1e}"
        )

