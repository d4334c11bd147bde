"""Dialogue domain types: seeds, turns, and validated multi-turn records."""

from __future__ import annotations

from dataclasses import dataclass

SEED_KINDS = ("report_chunk", "question")
INVESTOR = "investor"
EXPERT = "expert"


@dataclass(frozen=True)
class Seed:
    kind: str
    ref_id: str
    text: str

    def __post_init__(self):
        if self.kind not in SEED_KINDS:
            raise ValueError(f"bad seed kind: {self.kind!r}")
        if not self.text.strip():
            raise ValueError("seed text empty")

    def to_record(self) -> dict:
        return {"kind": self.kind, "ref_id": self.ref_id, "text": self.text}

    @classmethod
    def from_record(cls, rec: dict) -> "Seed":
        return cls(rec["kind"], rec["ref_id"], rec["text"])


@dataclass(frozen=True)
class Turn:
    role: str
    text: str

    def __post_init__(self):
        if self.role not in (INVESTOR, EXPERT):
            raise ValueError(f"bad turn role: {self.role!r}")
        if not self.text.strip():
            raise ValueError("turn text empty")


@dataclass(frozen=True)
class DialogueRecord:
    id: str
    seed: Seed
    round: int
    turns: tuple[Turn, ...]
    model: str
    created_at: str
    truncated: bool = False
    attempt: int = 1

    def __post_init__(self):
        turns = tuple(self.turns)
        object.__setattr__(self, "turns", turns)
        if len(turns) < 2 or len(turns) % 2 != 0:
            raise ValueError("turns must hold at least one complete Q/A pair")
        for i, turn in enumerate(turns):
            expected = INVESTOR if i % 2 == 0 else EXPERT
            if turn.role != expected:
                raise ValueError(f"turn {i} must be {expected}, got {turn.role}")

    @property
    def pair_count(self) -> int:
        return len(self.turns) // 2

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "seed": self.seed.to_record(),
            "round": self.round,
            "turns": [{"role": t.role, "text": t.text} for t in self.turns],
            "model": self.model,
            "created_at": self.created_at,
            "truncated": self.truncated,
            "attempt": self.attempt,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "DialogueRecord":
        return cls(
            id=rec["id"],
            seed=Seed.from_record(rec["seed"]),
            round=rec["round"],
            turns=tuple(Turn(t["role"], t["text"]) for t in rec["turns"]),
            model=rec["model"],
            created_at=rec.get("created_at", ""),
            truncated=rec.get("truncated", False),
            attempt=rec.get("attempt", 1),
        )
