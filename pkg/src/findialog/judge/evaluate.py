"""Score candidate answers with an LLM judge and aggregate per-model means.

Every (question, model) pair yields exactly one JudgeScoreRecord, persisted
to the scores log before aggregation; interrupted runs resume from the log,
which is the source of truth for the final report.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Sequence

from ..dialogue.prompts import PromptTemplate
from ..errors import (
    AllFailed,
    BadResponse,
    NoScore,
    OutOfRange,
    RateLimitedExhausted,
    TransportError,
)
from ..gateway.client import Gateway
from ..store.jsonl import append_record, iter_records
from .prompts import parse_score, render_judge_prompt
from .types import CandidateAnswer, EvalQuestion, EvalReport, JudgeScoreRecord, ModelAggregate

log = logging.getLogger(__name__)


def aggregate(records: Sequence[JudgeScoreRecord], judge_model: str = "") -> EvalReport:
    by_model: dict[str, list[JudgeScoreRecord]] = {}
    for rec in records:
        by_model.setdefault(rec.model_name, []).append(rec)
    aggregates = []
    for model, recs in by_model.items():
        scored = [r.score for r in recs if r.status == "scored"]
        if not scored:
            raise AllFailed(f"model {model} has zero scored records")
        aggregates.append(ModelAggregate(
            model_name=model,
            mean=sum(scored) / len(scored),
            n_scored=len(scored),
            n_failed=len(recs) - len(scored),
        ))
    aggregates.sort(key=lambda m: (m.mean, m.model_name))
    return EvalReport(models=aggregates, judge_model=judge_model)


def evaluate(questions: Sequence[EvalQuestion], answers: Sequence[CandidateAnswer],
             gateway: Gateway, retries: int = 2, *, mode: str = "replay",
             judge_model: str = "gpt-4", template: PromptTemplate | None = None,
             scores_path: str | Path | None = None) -> tuple[EvalReport, list[JudgeScoreRecord]]:
    """Judge every (question, model) pair; missing answers are pre-marked failed."""
    question_ids = [q.id for q in questions]
    if len(set(question_ids)) != len(question_ids):
        raise ValueError("duplicate question ids")
    by_pair: dict[tuple[str, str], CandidateAnswer] = {}
    models: list[str] = []
    for ans in answers:
        key = (ans.question_id, ans.model_name)
        if key in by_pair:
            raise ValueError(f"duplicate answer for {key}")
        by_pair[key] = ans
        if ans.model_name not in models:
            models.append(ans.model_name)
    models.sort()

    done: dict[tuple[str, str], JudgeScoreRecord] = {}
    if scores_path is not None and Path(scores_path).exists():
        for rec in iter_records(scores_path):
            loaded = JudgeScoreRecord.from_record(rec)
            done[(loaded.question_id, loaded.model_name)] = loaded

    records: list[JudgeScoreRecord] = []

    def emit(rec: JudgeScoreRecord) -> None:
        records.append(rec)
        if scores_path is not None:
            append_record(scores_path, rec.to_record(), fsync=False)

    for model in models:
        for question in sorted(questions, key=lambda q: q.id):
            key = (question.id, model)
            if key in done:
                records.append(done[key])
                continue
            answer = by_pair.get(key)
            if answer is None:
                emit(JudgeScoreRecord(question.id, model, "failed",
                                      rationale="missing answer", judge_model=judge_model))
                continue
            emit(_judge_pair(question, answer, gateway, retries, mode, judge_model, template))
    return aggregate(records, judge_model), records


def _judge_pair(question: EvalQuestion, answer: CandidateAnswer, gateway: Gateway,
                retries: int, mode: str, judge_model: str,
                template: PromptTemplate | None) -> JudgeScoreRecord:
    base_tag = f"judge:{answer.model_name}:{question.id}"
    failure = "no attempt"
    for attempt in range(1, retries + 2):
        tag = base_tag if attempt == 1 else f"{base_tag}#a{attempt}"
        req = render_judge_prompt(question, answer, template,
                                  judge_model=judge_model, tag=tag)
        try:
            resp = gateway.complete(req, mode)
        except (RateLimitedExhausted, TransportError, BadResponse) as exc:
            log.warning("judge call failed for %s: %s", base_tag, exc)
            return JudgeScoreRecord(question.id, answer.model_name, "failed",
                                    rationale=f"{exc.code}: {exc}", judge_model=judge_model)
        try:
            score = parse_score(resp.content)
        except (NoScore, OutOfRange) as exc:
            failure = f"{exc.code}: {exc}"
            continue
        return JudgeScoreRecord(question.id, answer.model_name, "scored", score=score,
                                rationale=resp.content, judge_model=judge_model)
    return JudgeScoreRecord(question.id, answer.model_name, "failed",
                            rationale=failure, judge_model=judge_model)


def report_markdown(report: EvalReport) -> str:
    """Single-row layout: model columns ascending by mean, one row of means."""
    names = [m.model_name for m in report.models]
    means = [f"{m.mean:.2f}" if m.mean is not None else "-" for m in report.models]
    lines = [
        "| " + " | ".join(names) + " |",
        "| " + " | ".join("---:" for _ in names) + " |",
        "| " + " | ".join(means) + " |",
    ]
    if report.judge_model:
        lines.append("")
        lines.append(f"Judge: {report.judge_model}; scores on a 1-10 integer scale.")
    return "\n".join(lines) + "\n"


def report_from_means(means: dict[str, float]) -> EvalReport:
    """Build a report directly from per-model means (for rendering fixtures)."""
    aggregates = [ModelAggregate(name, mean, 0, 0) for name, mean in means.items()]
    aggregates.sort(key=lambda m: (m.mean, m.model_name))
    return EvalReport(models=aggregates)
