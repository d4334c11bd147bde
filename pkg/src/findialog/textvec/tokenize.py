"""CJK-aware tokenizer.

Lowercases, then emits overlapping character bigrams for runs of CJK
ideographs (a length-1 run emits the single character) and whole tokens for
runs of non-CJK alphanumerics. Punctuation and whitespace separate runs.
Total on arbitrary input: never raises, never emits an empty term.
"""

from __future__ import annotations

from ..corpus.units import is_cjk_ideograph


def tokenize(text: str) -> list[str]:
    text = text.lower()
    terms: list[str] = []
    cjk_run: list[str] = []
    word_start = -1

    def flush_cjk():
        if len(cjk_run) == 1:
            terms.append(cjk_run[0])
        else:
            terms.extend(cjk_run[i] + cjk_run[i + 1] for i in range(len(cjk_run) - 1))
        cjk_run.clear()

    for i, ch in enumerate(text):
        if is_cjk_ideograph(ch):
            if word_start >= 0:
                terms.append(text[word_start:i])
                word_start = -1
            cjk_run.append(ch)
        elif ch.isalnum():
            if cjk_run:
                flush_cjk()
            if word_start < 0:
                word_start = i
        else:
            if cjk_run:
                flush_cjk()
            if word_start >= 0:
                terms.append(text[word_start:i])
                word_start = -1
    if cjk_run:
        flush_cjk()
    if word_start >= 0:
        terms.append(text[word_start:])
    return terms
