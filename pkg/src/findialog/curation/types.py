"""Question lifecycle types for the expert review workflow.

A question enters as ``pending`` (or ``kept`` when contributed directly by
an expert), is adjudicated exactly once (keep / remove / edit), and carries
an optimistic-concurrency revision that increments on every successful
mutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

ORIGINS = ("extracted", "expert_added")
STATUSES = ("pending", "kept", "removed", "edited")
ACTIONS = ("keep", "remove", "edit")


@dataclass
class QuestionRecord:
    id: str
    text: str
    origin: str = "extracted"
    source: Optional[tuple[str, int]] = None  # (dialogue id, turn index)
    round: int = 0
    status: str = "pending"
    edited_text: Optional[str] = None
    cluster: Optional[int] = None
    use_count: int = 0
    revision: int = 0

    @property
    def effective_text(self) -> str:
        return self.edited_text if self.status == "edited" and self.edited_text else self.text

    def validate(self) -> None:
        if not self.text.strip():
            raise ValueError(f"{self.id}: text empty")
        if self.origin not in ORIGINS:
            raise ValueError(f"{self.id}: bad origin {self.origin!r}")
        if self.status not in STATUSES:
            raise ValueError(f"{self.id}: bad status {self.status!r}")
        if self.status == "edited":
            if not self.edited_text or not self.edited_text.strip():
                raise ValueError(f"{self.id}: edited without edited_text")
            if self.edited_text == self.text:
                raise ValueError(f"{self.id}: edited_text identical to text")
        if self.origin == "expert_added" and self.status == "pending":
            raise ValueError(f"{self.id}: expert_added question cannot be pending")
        if self.use_count < 0 or self.revision < 0:
            raise ValueError(f"{self.id}: negative counter")

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "origin": self.origin,
            "source": list(self.source) if self.source else None,
            "round": self.round,
            "status": self.status,
            "edited_text": self.edited_text,
            "cluster": self.cluster,
            "use_count": self.use_count,
            "revision": self.revision,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "QuestionRecord":
        source = rec.get("source")
        return cls(
            id=rec["id"],
            text=rec["text"],
            origin=rec.get("origin", "extracted"),
            source=(source[0], source[1]) if source else None,
            round=rec.get("round", 0),
            status=rec.get("status", "pending"),
            edited_text=rec.get("edited_text"),
            cluster=rec.get("cluster"),
            use_count=rec.get("use_count", 0),
            revision=rec.get("revision", 0),
        )


@dataclass(frozen=True)
class Verdict:
    question_id: str
    action: str
    reviewer: str
    expected_revision: int
    new_text: Optional[str] = None

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise ValueError(f"bad action: {self.action!r}")
        if self.action == "edit" and (self.new_text is None or not self.new_text.strip()):
            raise ValueError("edit verdict requires nonempty new_text")


@dataclass
class BatchEntry:
    question_id: str
    cluster: int
    is_representative: bool

    def to_record(self) -> dict:
        return {"question_id": self.question_id, "cluster": self.cluster,
                "is_representative": self.is_representative}


@dataclass
class ReviewBatch:
    id: str
    round: int
    entries: list[BatchEntry] = field(default_factory=list)
    coverage_note_slots: dict[int, str] = field(default_factory=dict)
    themes: dict[int, str] = field(default_factory=dict)
    cluster_sizes: dict[int, int] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "round": self.round,
            "entries": [e.to_record() for e in self.entries],
            "coverage_note_slots": {str(k): v for k, v in self.coverage_note_slots.items()},
            "themes": {str(k): v for k, v in self.themes.items()},
            "cluster_sizes": {str(k): v for k, v in self.cluster_sizes.items()},
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ReviewBatch":
        return cls(
            id=rec["id"],
            round=rec["round"],
            entries=[BatchEntry(e["question_id"], e["cluster"], e["is_representative"])
                     for e in rec["entries"]],
            coverage_note_slots={int(k): v for k, v in rec.get("coverage_note_slots", {}).items()},
            themes={int(k): v for k, v in rec.get("themes", {}).items()},
            cluster_sizes={int(k): v for k, v in rec.get("cluster_sizes", {}).items()},
        )
