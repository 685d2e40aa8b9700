"""
Word/byte tokenizer with a vocabulary built from the table corpus.  Ids
below 256 are raw UTF-8 bytes, used for any piece outside the vocabulary,
so decode(encode(text)) == text for every text.
"""

import hashlib
import json
import re

BYTE_TOKENS = 256

# Every character falls in exactly one alternative
PIECE = re.compile(r"\w+|\s|[^\w\s]")

def split_pieces(text):
    return PIECE.findall(text)

class Tokenizer:

    def __init__(self, pieces):

        self.pieces = list(pieces)
        self.ids = {
            p: BYTE_TOKENS + ix
            for ix, p in enumerate(self.pieces)
        }

        if len(self.ids) != len(self.pieces):
            raise ValueError("Tokenizer pieces must be distinct")

    @staticmethod
    def build(texts):
        pieces = set()
        for t in texts:
            pieces.update(split_pieces(t))
        return Tokenizer(sorted(pieces))

    @property
    def vocab_size(self):
        return BYTE_TOKENS + len(self.pieces)

    def encode(self, text):

        out = []

        for piece in split_pieces(text):
            ix = self.ids.get(piece)
            if ix is None:
                out.extend(piece.encode("utf-8"))
            else:
                out.append(ix)

        return out

    def decode(self, ids):

        parts = []
        pending = bytearray()

        for ix in ids:
            if ix < BYTE_TOKENS:
                pending.append(ix)
                continue
            if pending:
                parts.append(pending.decode("utf-8", errors="replace"))
                pending = bytearray()
            parts.append(self.pieces[ix - BYTE_TOKENS])

        if pending:
            parts.append(pending.decode("utf-8", errors="replace"))

        return "".join(parts)

    def digest(self):
        data = json.dumps(self.pieces, ensure_ascii=False).encode("utf-8")
        return hashlib.sha256(data).hexdigest()

    def to_dict(self):
        return { "pieces": self.pieces, "digest": self.digest() }

    @staticmethod
    def from_dict(d):
        return Tokenizer(d["pieces"])

