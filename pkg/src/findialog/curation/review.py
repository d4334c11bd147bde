"""Question store and review-batch construction.

The store is the single writer for the question pool: verdicts go through
an optimistic revision check under one lock, the audit log is appended
(and flushed) before the pool snapshot is rewritten, and only then does the
caller see the updated record.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Iterable, Optional, Sequence

from ..errors import (
    EmptyText,
    InvalidTransition,
    NothingPending,
    RevisionConflict,
    UnknownQuestion,
)
from ..store.jsonl import append_record, iter_records, write_atomic
from ..textvec.cluster import ClusteringResult, representatives
from ..textvec.sparse import SparseVector
from .types import QuestionRecord, ReviewBatch, BatchEntry, Verdict


class QuestionStore:
    """In-memory pool with optional JSONL persistence (snapshot + audit log).

    With ``autosave`` the pool snapshot is rewritten after every mutation
    (the service's mode: audit line flushed first, then the snapshot, then
    the caller sees the result). The round pipeline sets autosave=False and
    persists batches atomically at phase checkpoints instead, draining the
    audit buffer into the round's verdicts file.
    """

    def __init__(self, questions_path: str | Path | None = None,
                 audit_path: str | Path | None = None, autosave: bool = True):
        self.questions_path = Path(questions_path) if questions_path else None
        self.audit_path = Path(audit_path) if audit_path else None
        self.autosave = autosave
        self.audit_buffer: list[dict] = []
        self._records: dict[str, QuestionRecord] = {}
        self._lock = threading.Lock()
        self._expert_seq = 0
        if self.questions_path and self.questions_path.exists():
            for rec in iter_records(self.questions_path):
                q = QuestionRecord.from_record(rec)
                self._records[q.id] = q
                if q.origin == "expert_added":
                    self._expert_seq += 1

    # -- reads ---------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._records)

    def get(self, question_id: str) -> QuestionRecord:
        try:
            return self._records[question_id]
        except KeyError:
            raise UnknownQuestion(question_id) from None

    def all(self) -> list[QuestionRecord]:
        return sorted(self._records.values(), key=lambda q: q.id)

    def by_status(self, *statuses: str) -> list[QuestionRecord]:
        return [q for q in self.all() if q.status in statuses]

    def pending(self) -> list[QuestionRecord]:
        return self.by_status("pending")

    def kept(self) -> list[QuestionRecord]:
        """Questions usable downstream (kept or edited)."""
        return self.by_status("kept", "edited")

    # -- writes --------------------------------------------------------------

    def _persist(self, audit: dict | None) -> None:
        if audit is not None:
            self.audit_buffer.append(audit)
            if self.audit_path is not None:
                append_record(self.audit_path, audit)
        if self.autosave and self.questions_path is not None:
            write_atomic(self.questions_path, (q.to_record() for q in self.all()))

    def save(self, path: str | Path | None = None) -> None:
        """Atomically rewrite the pool snapshot (checkpoint path)."""
        target = Path(path) if path else self.questions_path
        if target is None:
            raise ValueError("no questions path to save to")
        write_atomic(target, (q.to_record() for q in self.all()))

    def drain_audit(self) -> list[dict]:
        events, self.audit_buffer = self.audit_buffer, []
        return events

    def add(self, questions: Iterable[QuestionRecord], persist: bool = True) -> None:
        with self._lock:
            for q in questions:
                if q.id in self._records:
                    raise ValueError(f"duplicate question id: {q.id}")
                self._records[q.id] = q
            if persist:
                self._persist(None)

    def apply_verdict(self, verdict: Verdict) -> QuestionRecord:
        with self._lock:
            q = self.get(verdict.question_id)
            if verdict.expected_revision != q.revision:
                raise RevisionConflict(
                    f"{q.id}: expected revision {verdict.expected_revision}, have {q.revision}")
            if q.status != "pending":
                raise InvalidTransition(f"{q.id}: cannot re-review a {q.status} question")
            if verdict.action == "keep":
                q.status = "kept"
            elif verdict.action == "remove":
                q.status = "removed"
            else:  # edit
                assert verdict.new_text is not None
                new_text = verdict.new_text.strip()
                if new_text == q.text:
                    raise InvalidTransition(f"{q.id}: edit text identical to original")
                q.status = "edited"
                q.edited_text = new_text
            q.revision += 1
            q.validate()
            self._persist({
                "event": "verdict",
                "question_id": q.id,
                "action": verdict.action,
                "new_text": verdict.new_text,
                "reviewer": verdict.reviewer,
                "revision": q.revision,
            })
            return q

    def mark_removed_as_duplicate(self, question_id: str, surviving_id: str,
                                  similarity: float) -> QuestionRecord:
        """Dedup removal path; still only legal from pending."""
        with self._lock:
            q = self.get(question_id)
            if q.status != "pending":
                raise InvalidTransition(f"{q.id}: dedup removal from status {q.status}")
            q.status = "removed"
            q.revision += 1
            self._persist({
                "event": "dedup_removed",
                "question_id": q.id,
                "surviving_id": surviving_id,
                "similarity": similarity,
                "reviewer": "dedup",
                "revision": q.revision,
            })
            return q

    def add_expert_question(self, text: str, cluster_hint: Optional[int],
                            reviewer: str, round_no: int) -> QuestionRecord:
        text = (text or "").strip()
        if not text:
            raise EmptyText("expert question text empty")
        with self._lock:
            self._expert_seq += 1
            q = QuestionRecord(
                id=f"{round_no:04d}x{self._expert_seq:06d}",
                text=text,
                origin="expert_added",
                round=round_no,
                status="kept",
                cluster=cluster_hint,
            )
            q.validate()
            self._records[q.id] = q
            self._persist({
                "event": "expert_added",
                "question_id": q.id,
                "text": text,
                "cluster_hint": cluster_hint,
                "reviewer": reviewer,
                "revision": q.revision,
            })
            return q

    def increment_use(self, question_ids: Sequence[str], persist: bool = True) -> None:
        with self._lock:
            for qid in question_ids:
                self.get(qid).use_count += 1
            if persist:
                self._persist(None)

    def assign_clusters(self, question_ids: Sequence[str], assignments: Sequence[int],
                        persist: bool = True) -> None:
        with self._lock:
            for qid, cluster in zip(question_ids, assignments):
                self.get(qid).cluster = int(cluster)
            if persist:
                self._persist(None)


def apply_verdict(verdict: Verdict, store: QuestionStore) -> QuestionRecord:
    return store.apply_verdict(verdict)


def add_expert_question(text: str, cluster_hint: Optional[int], reviewer: str,
                        store: QuestionStore, round_no: int) -> QuestionRecord:
    return store.add_expert_question(text, cluster_hint, reviewer, round_no)


def build_review_batch(questions: Sequence[QuestionRecord],
                       vectors: Sequence[SparseVector],
                       clustering: ClusteringResult,
                       per_cluster: int, rng_seed: int, *,
                       batch_id: str, themes: dict[int, str] | None = None) -> ReviewBatch:
    """Representative-first batch for the expert panel.

    `questions` and `vectors` must be the exact pending nonzero-vector set
    the clustering was fitted on, in the same order.
    """
    if not questions:
        raise NothingPending("no pending questions to review")
    if not (len(questions) == len(vectors) == len(clustering.assignments)):
        raise ValueError("questions, vectors and clustering must align")
    for q in questions:
        if q.status != "pending":
            raise ValueError(f"{q.id}: review batch entries must be pending")
    reps = representatives(clustering, vectors, per_cluster, rng_seed)
    round_no = questions[0].round
    batch = ReviewBatch(id=batch_id, round=round_no, themes=themes or {})
    for cluster_idx, member_rows in enumerate(reps):
        batch.cluster_sizes[cluster_idx] = clustering.sizes()[cluster_idx]
        batch.coverage_note_slots.setdefault(cluster_idx, "")
        for rank, row in enumerate(member_rows):
            batch.entries.append(BatchEntry(
                question_id=questions[row].id,
                cluster=cluster_idx,
                is_representative=rank == 0,
            ))
    return batch
