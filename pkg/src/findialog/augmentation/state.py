"""Run state, state-directory layout, and phase checkpointing.

Phases advance ingested -> synthesized -> curated -> awaiting_review ->
review_done within a round; the round number increments only from
review_done, and `finished` is terminal. Every phase boundary atomically
rewrites the files that phase owns and commits state.json last, so an
interrupted run resumes at the last completed phase and reproduces the
uninterrupted run byte-for-byte (data files carry no timestamps; wall-clock
metadata lives in manifest.json and rounds/<n>/times.jsonl, which are
excluded from determinism comparisons).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from ..errors import StateLocked
from ..store.jsonl import write_text_atomic

PHASES = ("ingested", "synthesized", "curated", "awaiting_review", "review_done", "finished")

CheckpointHook = Callable[[str, int], None]


@dataclass
class RunState:
    run_id: str
    round: int = 0
    phase: str = "ingested"
    config_digest: str = ""
    pool_exhausted: bool = False
    counters: dict[str, Any] = field(default_factory=lambda: {
        "dialogues_total": 0,
        "questions_pending": 0,
        "questions_kept": 0,
        "questions_removed": 0,
        "per_round": {},
    })

    def to_record(self) -> dict:
        return {
            "run_id": self.run_id,
            "round": self.round,
            "phase": self.phase,
            "config_digest": self.config_digest,
            "pool_exhausted": self.pool_exhausted,
            "counters": self.counters,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "RunState":
        return cls(
            run_id=rec["run_id"],
            round=rec["round"],
            phase=rec["phase"],
            config_digest=rec.get("config_digest", ""),
            pool_exhausted=rec.get("pool_exhausted", False),
            counters=rec.get("counters", {}),
        )


class StateDir:
    """Path layout and durable state for one run."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    # -- layout ---------------------------------------------------------------

    @property
    def state_path(self) -> Path:
        return self.root / "state.json"

    @property
    def manifest_path(self) -> Path:
        return self.root / "manifest.json"

    @property
    def docs_path(self) -> Path:
        return self.root / "docs.jsonl"

    @property
    def chunks_path(self) -> Path:
        return self.root / "chunks.jsonl"

    @property
    def questions_path(self) -> Path:
        return self.root / "questions.jsonl"

    @property
    def cassette_path(self) -> Path:
        return self.root / "cassette.jsonl"

    @property
    def lock_path(self) -> Path:
        return self.root / "lock"

    def round_dir(self, round_no: int) -> Path:
        d = self.root / "rounds" / f"{round_no:04d}"
        d.mkdir(parents=True, exist_ok=True)
        return d

    def dialogues_path(self, round_no: int) -> Path:
        return self.round_dir(round_no) / "dialogues.jsonl"

    def round_questions_path(self, round_no: int) -> Path:
        return self.round_dir(round_no) / "questions.jsonl"

    def verdicts_path(self, round_no: int) -> Path:
        return self.round_dir(round_no) / "verdicts.jsonl"

    def seeds_path(self, round_no: int) -> Path:
        return self.round_dir(round_no) / "seeds.jsonl"

    def batch_path(self, round_no: int) -> Path:
        return self.round_dir(round_no) / "batch.json"

    def times_path(self, round_no: int) -> Path:
        return self.round_dir(round_no) / "times.jsonl"

    def themes_path(self, round_no: int) -> Path:
        return self.round_dir(round_no) / "themes.md"

    def data_files(self) -> list[Path]:
        """Deterministic data files (the byte-identity surface). Excludes
        manifest.json, times.jsonl, cassette, lock, and rendered reports."""
        names = {"dialogues.jsonl", "questions.jsonl", "verdicts.jsonl",
                 "seeds.jsonl", "batch.json"}
        files = [self.state_path, self.docs_path, self.chunks_path, self.questions_path]
        rounds_root = self.root / "rounds"
        if rounds_root.is_dir():
            for p in sorted(rounds_root.rglob("*")):
                if p.is_file() and p.name in names:
                    files.append(p)
        return [p for p in files if p.exists()]

    # -- state ----------------------------------------------------------------

    def exists(self) -> bool:
        return self.state_path.exists()

    def save_state(self, state: RunState) -> None:
        write_text_atomic(
            self.state_path,
            json.dumps(state.to_record(), ensure_ascii=False, sort_keys=True, indent=2) + "\n")

    def load_state(self) -> RunState:
        return RunState.from_record(json.loads(self.state_path.read_text(encoding="utf-8")))

    # -- locking --------------------------------------------------------------

    def acquire_lock(self) -> "StateLock":
        return StateLock(self.lock_path)


class StateLock:
    """Advisory single-writer lock (exclusive-create lock file)."""

    def __init__(self, path: Path):
        self.path = path
        self._held = False

    def __enter__(self) -> "StateLock":
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StateLocked(f"state directory is locked: {self.path}") from None
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        self._held = True
        return self

    def __exit__(self, *exc) -> None:
        self.release()

    def release(self) -> None:
        if self._held:
            try:
                self.path.unlink()
            except FileNotFoundError:
                pass
            self._held = False


@dataclass
class PhaseContext:
    """Everything a checkpoint needs to commit: files first, state last."""

    statedir: StateDir
    state: RunState
    on_checkpoint: Optional[CheckpointHook] = None

    def commit(self) -> None:
        self.statedir.save_state(self.state)
        if self.on_checkpoint is not None:
            self.on_checkpoint(self.state.phase, self.state.round)
