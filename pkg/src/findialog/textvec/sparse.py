"""Sparse vectors with nonnegative weights, sorted by column index."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SparseVector:
    entries: tuple[tuple[int, float], ...]
    norm: float

    def __post_init__(self):
        prev = -1
        for idx, w in self.entries:
            if idx <= prev:
                raise ValueError("entry indices must be strictly increasing")
            if w < 0:
                raise ValueError("weights must be nonnegative")
            prev = idx

    @property
    def is_zero(self) -> bool:
        return self.norm == 0.0

    @classmethod
    def from_counts(cls, weights: dict[int, float], normalize: bool = True) -> "SparseVector":
        entries = tuple(sorted((i, w) for i, w in weights.items() if w > 0))
        norm = math.sqrt(sum(w * w for _, w in entries))
        if norm == 0.0:
            return cls((), 0.0)
        if normalize:
            entries = tuple((i, w / norm) for i, w in entries)
            return cls(entries, 1.0)
        return cls(entries, norm)

    def dot(self, other: "SparseVector") -> float:
        a, b = self.entries, other.entries
        i = j = 0
        total = 0.0
        while i < len(a) and j < len(b):
            ia, ib = a[i][0], b[j][0]
            if ia == ib:
                total += a[i][1] * b[j][1]
                i += 1
                j += 1
            elif ia < ib:
                i += 1
            else:
                j += 1
        return total


def cosine(a: SparseVector, b: SparseVector) -> float:
    """dot(a, b) / (|a| |b|); 0 when either vector is zero. In [0, 1]."""
    if a.is_zero or b.is_zero:
        return 0.0
    value = a.dot(b) / (a.norm * b.norm)
    return min(1.0, max(0.0, value))
