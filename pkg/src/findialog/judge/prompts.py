"""Judge prompt rendering and score extraction.

The judge is asked to rate accuracy, relevance, and financial
professionalism on a 1-10 integer scale and to lead with a literal
``Score: <n>`` line; parsing accepts common separator drift (:, ：, =,
or whitespace) anywhere in the reply and validates the range.
"""

from __future__ import annotations

import re

from ..dialogue.prompts import PromptTemplate, load_default_template, substitute
from ..errors import NoScore, OutOfRange, TemplateError
from ..gateway.types import ChatMessage, ChatRequest
from .types import CandidateAnswer, EvalQuestion

JUDGE_TEMPERATURE = 0.0

_SCORE = re.compile(r"score\s*(?:[:：=]|\s)\s*(-?\d+)", re.IGNORECASE)


def render_judge_prompt(question: EvalQuestion, answer: CandidateAnswer,
                        template: PromptTemplate | None = None, *,
                        judge_model: str = "gpt-4", max_output_units: int = 512,
                        tag: str = "") -> ChatRequest:
    if template is None:
        template = load_default_template("judge")
    for required in ("{question}", "{answer}"):
        if required not in template.system + template.user:
            raise TemplateError(f"judge template missing {required}")
    values = {"question": question.text, "answer": answer.text}
    return ChatRequest(
        model=judge_model,
        messages=(
            ChatMessage("system", substitute(template.system, values)),
            ChatMessage("user", substitute(template.user, values)),
        ),
        temperature=JUDGE_TEMPERATURE,
        max_output_units=max_output_units,
        tag=tag,
    )


def parse_score(raw: str) -> int:
    match = _SCORE.search(raw)
    if not match:
        raise NoScore("no score line found")
    value = int(match.group(1))
    if not 1 <= value <= 10:
        raise OutOfRange(f"score {value} outside [1, 10]")
    return value
