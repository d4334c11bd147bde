"""Run manifests: resolved config snapshot, digest, append-only phase log.

The manifest is metadata and holds the run's timestamps; data files stay
timestamp-free so two runs with the same seed and cassette diff clean.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

TOOL_VERSION = "findialog 0.1.0"


def config_digest(config: dict[str, Any]) -> str:
    canonical = json.dumps(config, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class RunManifest:
    def __init__(self, run_id: str, config: dict[str, Any], created_at: str | None = None,
                 phase_log: list[dict] | None = None):
        self.run_id = run_id
        self.config = config
        self.config_digest = config_digest(config)
        self.created_at = created_at or datetime.now(timezone.utc).isoformat()
        self.tool_version = TOOL_VERSION
        self.phase_log: list[dict] = phase_log or []

    def log_phase(self, round_no: int, phase: str, counts: dict[str, int]) -> None:
        self.phase_log.append({
            "round": round_no,
            "phase": phase,
            "counts": counts,
            "at": datetime.now(timezone.utc).isoformat(),
        })

    def to_record(self) -> dict:
        return {
            "run_id": self.run_id,
            "created_at": self.created_at,
            "config": self.config,
            "config_digest": self.config_digest,
            "tool_version": self.tool_version,
            "phase_log": self.phase_log,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_record(), ensure_ascii=False, sort_keys=True, indent=2) + "\n",
            encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        rec = json.loads(Path(path).read_text(encoding="utf-8"))
        manifest = cls(rec["run_id"], rec["config"], created_at=rec["created_at"],
                       phase_log=rec.get("phase_log", []))
        return manifest
