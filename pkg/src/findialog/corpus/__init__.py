from .chunking import DEFAULT_MAX_UNITS, DEFAULT_OVERLAP_UNITS, Chunk, chunk
from .ingest import IngestIssue, IngestResult, ReportDoc, ingest, normalize_body
from .units import count_units, is_cjk, is_cjk_ideograph, unit_spans

__all__ = [
    "Chunk",
    "chunk",
    "DEFAULT_MAX_UNITS",
    "DEFAULT_OVERLAP_UNITS",
    "IngestIssue",
    "IngestResult",
    "ReportDoc",
    "ingest",
    "normalize_body",
    "count_units",
    "is_cjk",
    "is_cjk_ideograph",
    "unit_spans",
]
