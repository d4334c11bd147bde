"""Pull investor questions out of dialogue records."""

from __future__ import annotations

from typing import Sequence

from ..dialogue.types import INVESTOR, DialogueRecord
from .types import QuestionRecord


def extract_questions(dialogues: Sequence[DialogueRecord]) -> list[QuestionRecord]:
    """One pending QuestionRecord per investor turn, ordered by dialogue id
    then turn index; the round is inherited from the dialogue."""
    questions: list[QuestionRecord] = []
    for dlg in sorted(dialogues, key=lambda d: d.id):
        for idx, turn in enumerate(dlg.turns):
            if turn.role != INVESTOR:
                continue
            # '.t' keeps ids URL-safe (a '#' would be eaten as a fragment)
            questions.append(QuestionRecord(
                id=f"{dlg.id}.t{idx:02d}",
                text=turn.text.strip(),
                origin="extracted",
                source=(dlg.id, idx),
                round=dlg.round,
                status="pending",
            ))
    return questions
