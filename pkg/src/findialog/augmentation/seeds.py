"""Seed selection for augmentation rounds."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..curation.types import QuestionRecord
from ..dialogue.types import Seed
from ..errors import PoolExhausted


def select_seeds(pool: Sequence[QuestionRecord], n: int, max_uses: int,
                 rng_seed: int) -> list[Seed]:
    """Uniform sample without replacement of min(n, eligible) kept questions.

    Eligibility: status kept/edited and use_count < max_uses. Selected
    records get use_count incremented in place; callers persist them with
    the same checkpoint that persists the dialogues the seeds produced.
    """
    if n < 1:
        raise ValueError("n must be positive")
    eligible = [q for q in sorted(pool, key=lambda q: q.id)
                if q.status in ("kept", "edited") and q.use_count < max_uses]
    if not eligible:
        raise PoolExhausted("no eligible seed questions (pool empty or all at max_uses)")
    take = min(n, len(eligible))
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    picked_rows = sorted(int(i) for i in rng.choice(len(eligible), size=take, replace=False))
    seeds = []
    for row in picked_rows:
        q = eligible[row]
        q.use_count += 1
        seeds.append(Seed(kind="question", ref_id=q.id, text=q.effective_text))
    return seeds
