"""Prompt templates and request rendering for dialogue simulation.

Templates are UTF-8 text files with ``{placeholder}`` slots; a line holding
only ``%%%`` separates the system part from the user part. Placeholders not
covered by the substitution map are a template_error, which catches typos
like ``{bogus}`` before any request is sent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import TemplateError
from ..gateway.types import ChatMessage, ChatRequest
from .types import Seed

_PLACEHOLDER = re.compile(r"\{([a-z_]+)\}")
_SECTION_SEP = "%%%"


@dataclass(frozen=True)
class PromptTemplate:
    system: str
    user: str

    @classmethod
    def from_text(cls, text: str) -> "PromptTemplate":
        if f"\n{_SECTION_SEP}\n" not in text:
            raise TemplateError(f"template missing '{_SECTION_SEP}' system/user separator")
        system, user = text.split(f"\n{_SECTION_SEP}\n", 1)
        return cls(system.strip("\n"), user.strip("\n"))

    @classmethod
    def from_file(cls, path: str | Path) -> "PromptTemplate":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def load_default_template(name: str) -> PromptTemplate:
    text = resources.files("findialog.templates").joinpath(f"{name}.txt").read_text(encoding="utf-8")
    return PromptTemplate.from_text(text)


def substitute(template_text: str, values: dict[str, str]) -> str:
    def _sub(match: re.Match) -> str:
        key = match.group(1)
        if key not in values:
            raise TemplateError(f"unknown placeholder {{{key}}}")
        return values[key]

    return _PLACEHOLDER.sub(_sub, template_text)


def render_prompt(seed: Seed, target_pairs: int, template: PromptTemplate | None = None, *,
                  model: str = "gpt-3.5-turbo", temperature: float = 0.7,
                  max_output_units: int = 1024, tag: str = "") -> ChatRequest:
    """Build the simulation request for a seed.

    report_chunk seeds embed the chunk text as grounding context; question
    seeds mandate the seed question as the opening investor turn.
    """
    if not 1 <= target_pairs <= 8:
        raise ValueError("target_pairs must be in [1, 8]")
    if template is None:
        template = load_default_template(
            "dialogue_report_chunk" if seed.kind == "report_chunk" else "dialogue_question_seed")
    values = {"target_pairs": str(target_pairs)}
    if seed.kind == "report_chunk":
        values["context"] = seed.text
    else:
        values["seed_question"] = seed.text
    system = substitute(template.system, values)
    user = substitute(template.user, values)
    return ChatRequest(
        model=model,
        messages=(ChatMessage("system", system), ChatMessage("user", user)),
        temperature=temperature,
        max_output_units=max_output_units,
        tag=tag,
    )
