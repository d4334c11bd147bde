"""Topic distribution over a clustered question set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..curation.types import QuestionRecord
from ..textvec.cluster import ClusteringResult, representatives, top_terms
from ..textvec.sparse import SparseVector
from ..textvec.tfidf import Vocabulary


@dataclass(frozen=True)
class TopicRow:
    theme_label: str
    size: int
    share: float
    samples: list[str]

    def to_record(self) -> dict:
        return {"theme_label": self.theme_label, "size": self.size,
                "share": self.share, "samples": self.samples}


def topic_report(questions: Sequence[QuestionRecord],
                 vectors: Sequence[SparseVector],
                 clustering: ClusteringResult,
                 vocab: Vocabulary,
                 rng_seed: int = 0) -> list[TopicRow]:
    """Per-cluster theme label (top-5 centroid terms joined by '/'), size,
    share of the pool, and up to 3 representative sample questions."""
    if not (len(questions) == len(vectors) == len(clustering.assignments)):
        raise ValueError("questions, vectors and clustering must align")
    n = len(questions)
    reps = representatives(clustering, vectors, per_cluster=3, rng_seed=rng_seed)
    rows = []
    sizes = clustering.sizes()
    for cluster_idx in range(clustering.k):
        label = "/".join(top_terms(clustering.centroids[cluster_idx], vocab, 5))
        rows.append(TopicRow(
            theme_label=label,
            size=sizes[cluster_idx],
            share=sizes[cluster_idx] / n,
            samples=[questions[i].effective_text for i in reps[cluster_idx][:3]],
        ))
    return rows


def topics_markdown(rows: list[TopicRow]) -> str:
    lines = [
        "| Theme | Size | Share | Sample questions |",
        "| --- | ---: | ---: | --- |",
    ]
    for row in rows:
        samples = "<br>".join(s.replace("|", "\\|") for s in row.samples)
        lines.append(f"| {row.theme_label} | {row.size} | {row.share:.1%} | {samples} |")
    return "\n".join(lines) + "\n"
