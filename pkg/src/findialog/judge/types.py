"""Evaluation harness types: questions, candidate answers, judge scores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class EvalQuestion:
    id: str
    text: str

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("question text empty")


@dataclass(frozen=True)
class CandidateAnswer:
    question_id: str
    model_name: str
    text: str


@dataclass(frozen=True)
class JudgeScoreRecord:
    question_id: str
    model_name: str
    status: str  # "scored" | "failed"
    score: Optional[int] = None
    rationale: str = ""
    judge_model: str = ""

    def __post_init__(self):
        if self.status not in ("scored", "failed"):
            raise ValueError(f"bad status: {self.status!r}")
        if self.status == "scored" and (self.score is None or not 1 <= self.score <= 10):
            raise ValueError("scored record requires score in [1, 10]")

    def to_record(self) -> dict:
        return {
            "question_id": self.question_id,
            "model_name": self.model_name,
            "status": self.status,
            "score": self.score,
            "rationale": self.rationale,
            "judge_model": self.judge_model,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "JudgeScoreRecord":
        return cls(
            question_id=rec["question_id"],
            model_name=rec["model_name"],
            status=rec["status"],
            score=rec.get("score"),
            rationale=rec.get("rationale", ""),
            judge_model=rec.get("judge_model", ""),
        )


@dataclass(frozen=True)
class ModelAggregate:
    model_name: str
    mean: Optional[float]
    n_scored: int
    n_failed: int

    def to_record(self) -> dict:
        return {"model_name": self.model_name, "mean": self.mean,
                "n_scored": self.n_scored, "n_failed": self.n_failed}


@dataclass(frozen=True)
class EvalReport:
    models: list[ModelAggregate]  # sorted by mean ascending, ties by name
    judge_model: str = ""

    def to_record(self) -> dict:
        return {"models": [m.to_record() for m in self.models], "judge_model": self.judge_model}
