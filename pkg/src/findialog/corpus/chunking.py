"""Slice documents into generation-sized chunks.

Chunks are windows over the document's unit sequence (see units.py): a new
window starts every ``max_units - overlap_units`` units, so consecutive
chunks share ``overlap_units`` units and splits never fall inside a non-CJK
token. Defaults (1400 units, 100 overlap) leave headroom under a 2048-token
generation ceiling for the prompt scaffold and the generated dialogue.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ingest import ReportDoc
from .units import unit_spans

DEFAULT_MAX_UNITS = 1400
DEFAULT_OVERLAP_UNITS = 100


@dataclass(frozen=True)
class Chunk:
    report_id: str
    index: int
    text: str
    unit_count: int

    @property
    def id(self) -> str:
        return f"{self.report_id}:{self.index:04d}"

    def to_record(self) -> dict:
        return {
            "report_id": self.report_id,
            "index": self.index,
            "text": self.text,
            "unit_count": self.unit_count,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Chunk":
        return cls(rec["report_id"], rec["index"], rec["text"], rec["unit_count"])


def chunk(doc: ReportDoc, max_units: int = DEFAULT_MAX_UNITS,
          overlap_units: int = DEFAULT_OVERLAP_UNITS) -> list[Chunk]:
    if max_units <= 0:
        raise ValueError("max_units must be positive")
    if not 0 <= overlap_units < max_units:
        raise ValueError("overlap_units must satisfy 0 <= overlap < max_units")
    spans = unit_spans(doc.body)
    n = len(spans)
    chunks: list[Chunk] = []
    step = max_units - overlap_units
    start = 0
    while start < n:
        end = min(start + max_units, n)
        text = doc.body[spans[start][0]:spans[end - 1][1]]
        chunks.append(Chunk(doc.id, len(chunks), text, end - start))
        start += step
    return chunks
