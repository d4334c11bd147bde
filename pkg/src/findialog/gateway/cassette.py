"""Append-only JSONL cassette of recorded responses, keyed by request digest.

Digest collisions are treated as hits; when a digest appears more than once
the last entry wins (append-only log semantics).
"""

from __future__ import annotations

import re
import threading
from datetime import datetime, timezone
from pathlib import Path

from ..errors import CassetteMiss
from ..store.jsonl import append_record, iter_records
from .types import ChatResponse

_DIGEST_RE = re.compile(r"^[0-9a-f]{64}$")


class Cassette:
    """In-memory digest -> response map backed by a JSONL file.

    Appends are serialized through a single writer lock so the gateway can
    be shared across threads.
    """

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[str, ChatResponse] = {}
        self._write_lock = threading.Lock()
        if self.path is not None and self.path.exists():
            for rec in iter_records(self.path):
                digest = rec["request_digest"]
                if not _DIGEST_RE.match(digest):
                    raise ValueError(f"bad request_digest in cassette: {digest!r}")
                self._entries[digest] = ChatResponse.from_record(rec["response"])

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, digest: str) -> bool:
        return digest in self._entries

    def lookup(self, digest: str) -> ChatResponse:
        try:
            return self._entries[digest]
        except KeyError:
            raise CassetteMiss(f"no cassette entry for digest {digest}") from None

    def record(self, digest: str, response: ChatResponse) -> None:
        if not _DIGEST_RE.match(digest):
            raise ValueError(f"bad digest: {digest!r}")
        with self._write_lock:
            self._entries[digest] = response
            if self.path is not None:
                append_record(self.path, {
                    "request_digest": digest,
                    "response": response.to_record(),
                    "recorded_at": datetime.now(timezone.utc).isoformat(),
                }, fsync=False)
