"""Sparse echelon forms over word-indexed vectors.

Words are encoded as integers whose natural order is deglex (longer words
are larger; equal lengths compare lexicographically, first letter most
significant).  Vectors are dicts code -> field element; the field is
whatever the values are (gmpy2 mpq at a specialization, Scalar in exact
mode).
"""

from __future__ import annotations

import heapq
from bisect import bisect_right


class WordCoder:
    def __init__(self, g: int, max_len: int):
        self.g = g
        self.max_len = max_len
        self.offsets = [0]
        for k in range(max_len + 1):
            self.offsets.append(self.offsets[-1] + g**k)
        self.powers = [g**k for k in range(max_len + 2)]

    def count_upto(self, k: int) -> int:
        return self.offsets[k + 1]

    def length(self, code: int) -> int:
        return bisect_right(self.offsets, code) - 1

    def encode(self, word) -> int:
        idx = 0
        for x in word:
            idx = idx * self.g + x
        return self.offsets[len(word)] + idx

    def decode(self, code: int) -> tuple:
        k = self.length(code)
        idx = code - self.offsets[k]
        out = []
        for _ in range(k):
            idx, x = divmod(idx, self.g)
            out.append(x)
        return tuple(reversed(out))

    def left(self, x: int, code: int) -> int:
        k = self.length(code)
        return self.offsets[k + 1] + x * self.powers[k] + (code - self.offsets[k])

    def right(self, code: int, x: int) -> int:
        k = self.length(code)
        return self.offsets[k + 1] + (code - self.offsets[k]) * self.g + x


class Echelon:
    """Rows with pairwise distinct leading (largest) codes, leading coeff 1."""

    def __init__(self):
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict, full: bool = False) -> dict:
        """Subtract pivot rows.  Head reduction stops at the first leading
        code that is not a pivot; full reduction clears every pivot code."""
        vec = dict(vec)
        rows = self.rows
        heap = [-c for c in vec]
        heapq.heapify(heap)
        kept = {}
        while heap:
            c = -heapq.heappop(heap)
            v = vec.get(c)
            if v is None or c in kept:
                continue
            if not v:
                del vec[c]
                continue
            row = rows.get(c)
            if row is None:
                if not full:
                    return vec
                kept[c] = v
                continue
            for cc, rv in row.items():
                old = vec.get(cc)
                if old is None:
                    vec[cc] = -v * rv
                    heapq.heappush(heap, -cc)
                else:
                    nv = old - v * rv
                    if nv:
                        vec[cc] = nv
                    else:
                        del vec[cc]
        return {c: v for c, v in vec.items() if v}

    def insert(self, vec: dict) -> int | None:
        """Reduce and, if nonzero, add as a new row; returns its pivot."""
        vec = self.reduce(vec)
        if not vec:
            return None
        lead = max(vec)
        inv = 1 / vec[lead]
        row = {c: v * inv for c, v in vec.items()}
        row[lead] = inv * vec[lead]
        self.rows[lead] = row
        return lead

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    return len(ech)
