"""Source document ingestion.

Accepts either a directory of UTF-8 ``.txt`` files or a JSONL manifest with
fields {title, source_uri, published_date, body}. Bodies are normalized
(NFC, CRLF to LF, long blank-line runs collapsed) and document ids are
content-derived so re-ingestion is reproducible.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Optional

log = logging.getLogger(__name__)

_BLANK_RUN = re.compile(r"\n{4,}")  # >2 consecutive blank lines


@dataclass(frozen=True)
class ReportDoc:
    id: str
    title: str
    source_uri: str
    published_date: Optional[str]
    body: str
    language: str = "zh"

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "source_uri": self.source_uri,
            "published_date": self.published_date,
            "body": self.body,
            "language": self.language,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ReportDoc":
        return cls(
            id=rec["id"],
            title=rec["title"],
            source_uri=rec["source_uri"],
            published_date=rec.get("published_date"),
            body=rec["body"],
            language=rec.get("language", "zh"),
        )


@dataclass(frozen=True)
class IngestIssue:
    source: str
    kind: str  # "unreadable" | "empty_document"
    detail: str


@dataclass
class IngestResult:
    docs: list[ReportDoc] = field(default_factory=list)
    issues: list[IngestIssue] = field(default_factory=list)


def normalize_body(text: str) -> str:
    text = unicodedata.normalize("NFC", text)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = _BLANK_RUN.sub("\n\n\n", text)
    return text.strip("\n")


def doc_id(source: str, body: str) -> str:
    h = hashlib.sha256()
    h.update(source.encode("utf-8"))
    h.update(b"\x00")
    h.update(body.encode("utf-8"))
    return h.hexdigest()[:16]


def _make_doc(source: str, title: str, source_uri: str, published_date: Optional[str],
              raw_body: str, language: str, result: IngestResult) -> None:
    body = normalize_body(raw_body)
    if not body.strip():
        log.warning("skipping empty document: %s", source)
        result.issues.append(IngestIssue(source, "empty_document", "body empty after normalization"))
        return
    if published_date is not None:
        try:
            date.fromisoformat(published_date)
        except ValueError:
            result.issues.append(IngestIssue(source, "unreadable", f"bad published_date: {published_date!r}"))
            return
    result.docs.append(ReportDoc(
        id=doc_id(source, body),
        title=title,
        source_uri=source_uri,
        published_date=published_date,
        body=body,
        language=language,
    ))


def ingest(path: str | Path, language: str = "zh") -> IngestResult:
    """Ingest a directory of .txt files or a .jsonl manifest.

    Per-file failures are reported in ``result.issues`` and the run
    continues; only a missing input path raises.
    """
    path = Path(path)
    result = IngestResult()
    if path.is_dir():
        for file in sorted(path.glob("*.txt"), key=lambda p: p.name):
            try:
                raw = file.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                result.issues.append(IngestIssue(file.name, "unreadable", str(exc)))
                continue
            _make_doc(file.name, file.stem, file.as_uri(), None, raw, language, result)
    elif path.is_file():
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except (OSError, UnicodeDecodeError) as exc:
            raise FileNotFoundError(f"cannot read manifest {path}: {exc}") from exc
        for n, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            source = f"{path.name}:{n}"
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                result.issues.append(IngestIssue(source, "unreadable", f"bad JSON: {exc}"))
                continue
            if not isinstance(rec, dict) or "body" not in rec:
                result.issues.append(IngestIssue(source, "unreadable", "missing required field: body"))
                continue
            _make_doc(
                source,
                str(rec.get("title", "")),
                str(rec.get("source_uri", "")),
                rec.get("published_date"),
                str(rec["body"]),
                str(rec.get("language", language)),
                result,
            )
    else:
        raise FileNotFoundError(f"input path does not exist: {path}")
    return result
