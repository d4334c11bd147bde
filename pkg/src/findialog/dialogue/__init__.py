from .parse import parse_transcript
from .prompts import PromptTemplate, load_default_template, render_prompt, substitute
from .synth import SynthConfig, synthesize
from .types import EXPERT, INVESTOR, DialogueRecord, Seed, Turn

__all__ = [
    "parse_transcript",
    "PromptTemplate",
    "load_default_template",
    "render_prompt",
    "substitute",
    "SynthConfig",
    "synthesize",
    "DialogueRecord",
    "Seed",
    "Turn",
    "INVESTOR",
    "EXPERT",
]
