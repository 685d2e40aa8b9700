"""
Table-incidence bit vectors packed into 64-bit words, and their XOR
Hamming distance.
"""

import dataclasses

import numpy as np

from .. exceptions import TableIdOutOfRange, LengthMismatch

WORD_BITS = 64

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)

def word_count(n_bits):
    return (n_bits + WORD_BITS - 1) // WORD_BITS

def popcount(words):
    """Per-word set bit count of a uint64 array"""

    x = np.asarray(words, dtype=np.uint64)
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)

@dataclasses.dataclass(frozen=True, eq=False)
class IncidenceVector:
    n_bits : int
    words : np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, IncidenceVector) and
            self.n_bits == other.n_bits and
            np.array_equal(self.words, other.words)
        )

    def __len__(self):
        return self.n_bits

    def __contains__(self, k):
        if k < 0 or k >= self.n_bits: return False
        w, b = divmod(k, WORD_BITS)
        return bool((int(self.words[w]) >> b) & 1)

    def count(self):
        return int(popcount(self.words).sum())

    def members(self):
        return [k for k in range(self.n_bits) if k in self]

def incidence(tables, n):

    words = np.zeros(word_count(n), dtype=np.uint64)

    for k in tables:
        if k < 0 or k >= n:
            raise TableIdOutOfRange(f"Table id {k} outside 0..{n - 1}")
        w, b = divmod(k, WORD_BITS)
        words[w] |= np.uint64(1) << np.uint64(b)

    return IncidenceVector(n_bits=n, words=words)

def hamming(a, b):

    if a.n_bits != b.n_bits:
        raise LengthMismatch(
            f"Incidence vectors over {a.n_bits} and {b.n_bits} tables"
        )

    return int(popcount(a.words ^ b.words).sum())

