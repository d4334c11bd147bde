"""Chat-completion domain types carried through the gateway."""

from __future__ import annotations

from dataclasses import dataclass, field

ROLES = ("system", "user", "assistant")
FINISH_REASONS = ("stop", "length", "other")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"bad role: {self.role!r}")
        if not self.content.strip():
            raise ValueError("message content empty")


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.7
    max_output_units: int = 1024
    tag: str = ""

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages empty")
        if self.messages[0].role not in ("system", "user"):
            raise ValueError("first message must be system or user")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature out of [0, 2]")
        if self.max_output_units <= 0:
            raise ValueError("max_output_units must be positive")
        if isinstance(self.messages, list):  # tolerate list construction
            object.__setattr__(self, "messages", tuple(self.messages))


@dataclass(frozen=True)
class ChatResponse:
    content: str
    finish_reason: str = "stop"
    prompt_units: int = 0
    output_units: int = 0

    def __post_init__(self):
        if self.finish_reason not in FINISH_REASONS:
            raise ValueError(f"bad finish_reason: {self.finish_reason!r}")
        if self.prompt_units < 0 or self.output_units < 0:
            raise ValueError("unit counts must be nonnegative")

    def to_record(self) -> dict:
        return {
            "content": self.content,
            "finish_reason": self.finish_reason,
            "prompt_units": self.prompt_units,
            "output_units": self.output_units,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ChatResponse":
        return cls(
            content=rec["content"],
            finish_reason=rec.get("finish_reason", "stop"),
            prompt_units=rec.get("prompt_units", 0),
            output_units=rec.get("output_units", 0),
        )


def request(model: str, messages: list[tuple[str, str]] | list[ChatMessage], *,
            temperature: float = 0.7, max_output_units: int = 1024, tag: str = "") -> ChatRequest:
    """Convenience constructor accepting (role, content) pairs."""
    msgs = tuple(m if isinstance(m, ChatMessage) else ChatMessage(*m) for m in messages)
    return ChatRequest(model=model, messages=msgs, temperature=temperature,
                       max_output_units=max_output_units, tag=tag)
