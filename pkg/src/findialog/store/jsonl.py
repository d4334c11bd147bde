"""JSONL persistence with atomic replace semantics.

Byte-level rules (see FORMATS.md): UTF-8, no BOM, one JSON object per line,
LF-terminated, keys sorted, compact separators. Sorted keys plus compact
separators make two writes of the same records byte-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Iterator

from ..errors import IoError


def dumps_record(record: dict[str, Any]) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def write_atomic(path: str | Path, records: Iterable[dict[str, Any]]) -> None:
    """Write records to `path` via temp-file + fsync + rename.

    Readers never observe a partial file: the target either keeps its old
    content or atomically becomes the complete new content.
    """
    path = Path(path)
    if not path.parent.is_dir():
        raise IoError(f"parent directory does not exist: {path.parent}")
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            for record in records:
                fh.write(dumps_record(record))
                fh.write("\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    finally:
        if os.path.exists(tmp_name):
            try:
                os.unlink(tmp_name)
            except OSError:
                pass


def write_text_atomic(path: str | Path, text: str) -> None:
    """Atomic variant for non-JSONL artifacts (reports, markdown)."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    finally:
        if os.path.exists(tmp_name):
            try:
                os.unlink(tmp_name)
            except OSError:
                pass


def read_records(path: str | Path) -> list[dict[str, Any]]:
    return list(iter_records(path))


def iter_records(path: str | Path) -> Iterator[dict[str, Any]]:
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)
    except OSError as exc:
        raise IoError(str(exc)) from exc


def append_record(path: str | Path, record: dict[str, Any], fsync: bool = True) -> None:
    """Append one record to a JSONL log; used for append-only audit files."""
    try:
        with open(path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps_record(record))
            fh.write("\n")
            fh.flush()
            if fsync:
                os.fsync(fh.fileno())
    except OSError as exc:
        raise IoError(str(exc)) from exc
