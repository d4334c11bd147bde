"""Near-duplicate pruning at a cosine-similarity threshold.

Similarity is cosine over character-3-gram term-frequency vectors of the
effective text. This space is deliberately corpus-independent (no idf), so
the threshold keeps its meaning as the pool grows. Texts are lowercased
with whitespace runs collapsed before gram extraction; texts shorter than
3 characters contribute themselves as a single gram.

The scan is greedy in id order: a question is removed iff its similarity to
some earlier-kept question exceeds the threshold, and the removal references
the earliest surviving near-duplicate. A length band (unit counts differing
by 40% or more are never compared) keeps the scan tractable; at the
similarity levels that matter here it cannot change the result, which the
test suite checks against an unblocked oracle.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..corpus.units import count_units
from .types import QuestionRecord

_WS = re.compile(r"\s+")

LENGTH_BAND = 0.4


def normalize_for_grams(text: str) -> str:
    return _WS.sub(" ", text.lower()).strip()


def trigram_counts(text: str) -> Counter:
    text = normalize_for_grams(text)
    if len(text) < 3:
        return Counter({text: 1}) if text else Counter()
    return Counter(text[i:i + 3] for i in range(len(text) - 2))


def counter_cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(w * b[g] for g, w in a.items() if g in b)
    if dot == 0:
        return 0.0
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    return min(1.0, dot / (norm_a * norm_b))


@dataclass(frozen=True)
class Removal:
    removed_id: str
    surviving_id: str
    similarity: float

    def to_record(self) -> dict:
        return {"removed_id": self.removed_id, "surviving_id": self.surviving_id,
                "similarity": self.similarity}


def _banded(u1: int, u2: int) -> bool:
    """True when the pair is within the comparable length band."""
    hi = max(u1, u2)
    if hi == 0:
        return True
    return abs(u1 - u2) < LENGTH_BAND * hi


def dedup(questions: Sequence[QuestionRecord], threshold: float = 0.99,
          use_length_band: bool = True) -> tuple[list[QuestionRecord], list[Removal]]:
    """Greedy near-duplicate scan; returns (kept in input order, removals in id order)."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    ordered = sorted(questions, key=lambda q: q.id)
    grams = {q.id: trigram_counts(q.effective_text) for q in ordered}
    units = {q.id: count_units(normalize_for_grams(q.effective_text)) for q in ordered}

    removed: dict[str, Removal] = {}
    kept_scan: list[QuestionRecord] = []
    for q in ordered:
        hit = None
        for prior in kept_scan:
            if use_length_band and not _banded(units[q.id], units[prior.id]):
                continue
            sim = counter_cosine(grams[q.id], grams[prior.id])
            if sim > threshold:
                hit = Removal(q.id, prior.id, sim)
                break
        if hit is None:
            kept_scan.append(q)
        else:
            removed[q.id] = hit

    kept = [q for q in questions if q.id not in removed]
    removals = [removed[q.id] for q in ordered if q.id in removed]
    return kept, removals
