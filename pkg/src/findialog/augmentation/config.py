"""Resolved pipeline configuration.

Loaded from TOML with flag overrides; the resolved snapshot is written to
the run manifest and digested, so a state directory pins the exact
configuration that produced it. All randomness derives from `rng_seed`.
"""

from __future__ import annotations

import hashlib
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_TARGET_DIALOGUES = 103_000  # headline size of the dataset this pipeline targets


@dataclass
class PipelineConfig:
    model: str = "gpt-3.5-turbo"
    temperature: float = 0.7
    max_output_units: int = 1024
    target_pairs: int = 4
    min_pairs: int = 1
    max_parse_retries: int = 2
    max_units: int = 1400
    overlap_units: int = 100
    target_dialogues: int = DEFAULT_TARGET_DIALOGUES
    max_rounds: int = 5
    seeds_per_round: int = 1000
    max_uses: int = 2
    per_cluster: int = 3
    dedup_threshold: float = 0.99
    min_df: int = 1
    k: Optional[int] = None
    rng_seed: int = 0
    language: str = "zh"

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, toml_path: str | Path | None = None,
             overrides: dict[str, Any] | None = None) -> "PipelineConfig":
        data: dict[str, Any] = {}
        if toml_path is not None:
            with open(toml_path, "rb") as fh:
                data.update(tomllib.load(fh))
        if overrides:
            data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)


def derive_seed(master: int, *parts: object) -> int:
    """Stable per-purpose PRNG seed: independent of call order, safe on resume."""
    payload = f"{master}|" + "|".join(str(p) for p in parts)
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
