"""Text unit counting for budgets and length statistics.

The counting rule (documented as "units" in every report footnote):
each CJK codepoint counts 1, each maximal run of non-CJK non-whitespace
characters counts 1, whitespace counts 0. CJK here means the Unified
Ideographs block, Extension A, and the CJK Symbols and Punctuation block.
"""

from __future__ import annotations

# (lo, hi) inclusive codepoint ranges
_CJK_COUNTABLE = (
    (0x4E00, 0x9FFF),  # CJK Unified Ideographs
    (0x3400, 0x4DBF),  # Extension A
    (0x3000, 0x303F),  # CJK Symbols and Punctuation
)

_CJK_IDEOGRAPH = (
    (0x4E00, 0x9FFF),
    (0x3400, 0x4DBF),
)


def is_cjk(ch: str) -> bool:
    """True for characters that count as single units (ideographs + CJK punctuation)."""
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _CJK_COUNTABLE)


def is_cjk_ideograph(ch: str) -> bool:
    """True for ideographs only; used by the tokenizer's bigram rule."""
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _CJK_IDEOGRAPH)


def unit_spans(text: str) -> list[tuple[int, int]]:
    """Decompose text into unit spans [(start, end), ...] over `text`.

    One span per CJK character, one span per maximal non-CJK non-whitespace
    run. Whitespace belongs to no span.
    """
    spans: list[tuple[int, int]] = []
    run_start = -1
    for i, ch in enumerate(text):
        if ch.isspace():
            if run_start >= 0:
                spans.append((run_start, i))
                run_start = -1
        elif is_cjk(ch):
            if run_start >= 0:
                spans.append((run_start, i))
                run_start = -1
            spans.append((i, i + 1))
        else:
            if run_start < 0:
                run_start = i
    if run_start >= 0:
        spans.append((run_start, len(text)))
    return spans


def count_units(text: str) -> int:
    return len(unit_spans(text))
