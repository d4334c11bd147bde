"""Dataset statistics: per-metric mean and 5%/95% quantiles.

"Words" are counted with the same unit rule as the corpus budget (one per
CJK character, one per non-CJK token); every rendered report footnotes this
so the numbers are comparable only under that stated rule. Quantiles use
linear interpolation between closest ranks (the common "type 7" rule).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..corpus.units import count_units
from ..dialogue.types import INVESTOR, DialogueRecord
from ..errors import EmptyInput

METRICS = ("dialog_pairs", "words_per_question", "words_per_answer", "words_per_dialog")

_METRIC_LABELS = {
    "dialog_pairs": "# dialog pairs",
    "words_per_question": "# words per question",
    "words_per_answer": "# words per answer",
    "words_per_dialog": "# words per dialog",
}

FOOTNOTE = ("'words' are text units: one per CJK character, one per non-CJK token; "
            "'dialog pairs' are Q/A exchanges (turn count / 2).")


def word_count(text: str) -> int:
    return count_units(text)


def quantile(values: Sequence[float], p: float) -> float:
    """Type-7 quantile: h = p*(n-1), interpolate between floor(h) and floor(h)+1.

    `values` must be sorted ascending and nonempty.
    """
    if not values:
        raise EmptyInput("quantile of empty values")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    n = len(values)
    if n == 1:
        return float(values[0])
    h = p * (n - 1)
    lo = math.floor(h)
    if lo >= n - 1:
        return float(values[n - 1])
    frac = h - lo
    return float(values[lo]) + frac * (float(values[lo + 1]) - float(values[lo]))


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    q05: float
    q95: float

    def to_record(self) -> dict:
        return {"mean": self.mean, "q05": self.q05, "q95": self.q95}


@dataclass(frozen=True)
class StatsReport:
    metrics: dict[str, MetricSummary]
    n_dialogues: int

    def to_record(self) -> dict:
        return {
            "metrics": {name: s.to_record() for name, s in self.metrics.items()},
            "n_dialogues": self.n_dialogues,
            "footnote": FOOTNOTE,
        }

    def to_markdown(self) -> str:
        lines = [
            "| | Mean | Q-5% | Q-95% |",
            "| --- | ---: | ---: | ---: |",
        ]
        for name in METRICS:
            s = self.metrics[name]
            lines.append(f"| {_METRIC_LABELS[name]} | {s.mean:.1f} | {s.q05:.1f} | {s.q95:.1f} |")
        lines.append("")
        lines.append(f"n = {self.n_dialogues} dialogues. Note: {FOOTNOTE}")
        return "\n".join(lines) + "\n"


def _summary(values: list[float]) -> MetricSummary:
    ordered = sorted(values)
    return MetricSummary(
        mean=sum(ordered) / len(ordered),
        q05=quantile(ordered, 0.05),
        q95=quantile(ordered, 0.95),
    )


def dataset_stats(dialogues: Sequence[DialogueRecord]) -> StatsReport:
    if not dialogues:
        raise EmptyInput("no dialogues")
    pairs: list[float] = []
    q_words: list[float] = []
    a_words: list[float] = []
    d_words: list[float] = []
    for dlg in dialogues:
        pairs.append(len(dlg.turns) / 2)
        total = 0
        for turn in dlg.turns:
            units = word_count(turn.text)
            total += units
            (q_words if turn.role == INVESTOR else a_words).append(float(units))
        d_words.append(float(total))
    return StatsReport(
        metrics={
            "dialog_pairs": _summary(pairs),
            "words_per_question": _summary(q_words),
            "words_per_answer": _summary(a_words),
            "words_per_dialog": _summary(d_words),
        },
        n_dialogues=len(dialogues),
    )
