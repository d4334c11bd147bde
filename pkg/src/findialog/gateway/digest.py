"""Canonical request digests for record/replay lookup.

The canonical serialization joins, with U+001E: model, temperature rendered
with exactly 4 decimal places, max_output_units, then each message as
role + U+001F + content. A nonempty tag is appended as one trailing field;
an empty tag contributes nothing, so untagged requests keep the plain
canonical form. Retried calls re-tag the request, which gives every attempt
its own digest and lets a cassette hold distinct responses per attempt.
"""

from __future__ import annotations

import hashlib

from .types import ChatRequest

_FIELD_SEP = ""
_MSG_SEP = ""


def canonical_serialization(req: ChatRequest) -> str:
    fields = [req.model, f"{req.temperature:.4f}", str(req.max_output_units)]
    fields.extend(f"{m.role}{_MSG_SEP}{m.content}" for m in req.messages)
    if req.tag:
        fields.append(req.tag)
    return _FIELD_SEP.join(fields)


def request_digest(req: ChatRequest) -> str:
    return hashlib.sha256(canonical_serialization(req).encode("utf-8")).hexdigest()
