"""Parse raw completions into alternating investor/expert turns.

Turn markers are lines starting (after optional whitespace) with Q/A (any
case) or 问/答, followed by an ASCII or fullwidth colon. Text until the next
marker is the turn body: inner newlines preserved, outer whitespace trimmed.
The longest valid alternating prefix starting with an investor turn is
returned; a trailing unpaired investor turn is dropped.
"""

from __future__ import annotations

import re

from ..errors import EmptyTurn, NoTurns
from .types import EXPERT, INVESTOR, Turn

_MARKER = re.compile(r"^\s*(?P<marker>[QqAa]|问|答)\s*[:：]\s?(?P<rest>.*)$")
_INVESTOR_MARKERS = {"q", "问"}


def parse_transcript(raw: str) -> list[Turn]:
    segments: list[tuple[str, list[str]]] = []
    body: list[str] | None = None
    for line in raw.splitlines():
        match = _MARKER.match(line)
        if match:
            role = INVESTOR if match.group("marker").lower() in _INVESTOR_MARKERS else EXPERT
            body = [match.group("rest")]
            segments.append((role, body))
        elif body is not None:
            body.append(line)
    if not segments:
        raise NoTurns("no turn marker found")
    texts = ["\n".join(lines).strip() for _, lines in segments]
    if any(not t for t in texts):
        raise EmptyTurn("turn marker with blank body")

    turns: list[Turn] = []
    expected = INVESTOR
    for (role, _), text in zip(segments, texts):
        if role != expected:
            break
        turns.append(Turn(role, text))
        expected = EXPERT if expected == INVESTOR else INVESTOR
    if len(turns) % 2 == 1:
        turns.pop()  # trailing unpaired investor turn
    if not turns:
        raise NoTurns("no leading investor turn")
    return turns
