"""Render -> complete -> parse with bounded re-asks on malformed output.

Each retry appends the attempt index to the request tag; tagged requests
digest differently, so record/replay keeps every attempt's response as a
distinct cassette entry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import datetime, timezone

from ..errors import EmptyTurn, NoTurns, SynthesisFailed
from ..gateway.client import Gateway
from ..gateway.digest import request_digest
from .parse import parse_transcript
from .prompts import PromptTemplate, render_prompt
from .types import DialogueRecord, Seed

log = logging.getLogger(__name__)


@dataclass
class SynthConfig:
    model: str = "gpt-3.5-turbo"
    target_pairs: int = 4
    min_pairs: int = 1
    max_parse_retries: int = 2
    temperature: float = 0.7
    max_output_units: int = 1024

    def __post_init__(self):
        if self.min_pairs < 1:
            raise ValueError("min_pairs must be >= 1")


def synthesize(seed: Seed, config: SynthConfig, gateway: Gateway, *,
               mode: str = "replay", round_no: int = 0, seq: int = 0,
               template: PromptTemplate | None = None) -> DialogueRecord:
    base_tag = f"dlg:r{round_no}:s{seq}:{seed.ref_id}"
    base_digest = None
    last_error = "no attempt made"
    for attempt in range(1, config.max_parse_retries + 2):
        tag = base_tag if attempt == 1 else f"{base_tag}#a{attempt}"
        req = render_prompt(
            seed, config.target_pairs, template,
            model=config.model, temperature=config.temperature,
            max_output_units=config.max_output_units, tag=tag,
        )
        if base_digest is None:
            base_digest = request_digest(req)
        resp = gateway.complete(req, mode)
        try:
            turns = parse_transcript(resp.content)
        except (NoTurns, EmptyTurn) as exc:
            last_error = f"{exc.code}: {exc}"
            log.debug("parse failure on attempt %d for %s: %s", attempt, base_tag, exc)
            continue
        pairs = len(turns) // 2
        if pairs < config.min_pairs:
            last_error = f"pair shortfall: got {pairs}, need {config.min_pairs}"
            continue
        return DialogueRecord(
            id=f"d{round_no:04d}{seq:06d}{base_digest[:8]}",
            seed=seed,
            round=round_no,
            turns=tuple(turns),
            model=config.model,
            created_at=datetime.now(timezone.utc).isoformat(),
            truncated=resp.finish_reason == "length",
            attempt=attempt,
        )
    raise SynthesisFailed(f"all attempts exhausted for {base_tag}; last error: {last_error}")
