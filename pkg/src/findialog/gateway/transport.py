"""Transports that actually produce a ChatResponse for a ChatRequest.

Two implementations: an HTTP transport speaking the generic chat-completion
JSON protocol, and a network-free deterministic mock (selected by a
``mock://`` endpoint URL) that fabricates plausible replies from the request
digest. The mock makes record-mode cassette fixtures reproducible offline.
"""

from __future__ import annotations

import hashlib

import httpx

from ..corpus.units import count_units
from ..errors import BadResponse
from .digest import request_digest
from .types import ChatRequest, ChatResponse


class TransportCallError(Exception):
    """Raised by transports; ``kind`` drives the client's retry decision."""

    RETRYABLE = ("rate_limit", "server", "network")

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind

    @property
    def retryable(self) -> bool:
        return self.kind in self.RETRYABLE


class HttpTransport:
    """POSTs to ``<base>/chat/completions`` with a bearer token."""

    def __init__(self, base_url: str, api_key: str | None, timeout: float = 60.0,
                 client: httpx.Client | None = None):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self._client = client or httpx.Client(timeout=timeout)

    def __call__(self, req: ChatRequest) -> ChatResponse:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": req.model,
            "messages": [{"role": m.role, "content": m.content} for m in req.messages],
            "temperature": req.temperature,
            "max_tokens": req.max_output_units,
        }
        try:
            resp = self._client.post(f"{self.base_url}/chat/completions", json=body, headers=headers)
        except httpx.TransportError as exc:
            raise TransportCallError("network", str(exc)) from exc
        if resp.status_code == 429:
            raise TransportCallError("rate_limit", "rate limited (429)")
        if resp.status_code >= 500:
            raise TransportCallError("server", f"server error ({resp.status_code})")
        if resp.status_code >= 400:
            raise TransportCallError("client", f"client error ({resp.status_code}): {resp.text[:200]}")
        try:
            payload = resp.json()
            choice = payload["choices"][0]
            content = choice["message"]["content"]
            if not isinstance(content, str):
                raise TypeError("content not a string")
            finish = choice.get("finish_reason", "stop")
            usage = payload.get("usage", {})
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise BadResponse(f"unparseable completion body: {exc}") from exc
        return ChatResponse(
            content=content,
            finish_reason=finish if finish in ("stop", "length") else "other",
            prompt_units=int(usage.get("prompt_tokens", 0)),
            output_units=int(usage.get("completion_tokens", 0)),
        )


_MOCK_TOPICS = (
    "盈利能力", "负债结构", "现金流状况", "研发投入", "市场份额",
    "估值水平", "毛利率变化", "产能扩张", "海外业务", "监管风险",
)

_MOCK_ANGLES = (
    "短期波动", "长期增长", "行业对比", "政策影响", "供应链安全",
    "成本控制", "分红政策", "竞争格局",
)


def _pair_count_hint(req: ChatRequest, default: int = 3) -> int:
    import re
    text = "\n".join(m.content for m in req.messages)
    m = re.search(r"(\d+)\s*轮问答", text)
    if m:
        return max(1, min(8, int(m.group(1))))
    return default


class MockTransport:
    """Deterministic reply generator; content is a pure function of the request.

    Judge-style prompts (containing a literal ``Score:`` instruction) get a
    score line; anything else gets a marker-tagged multi-pair transcript.
    """

    def __call__(self, req: ChatRequest) -> ChatResponse:
        digest = request_digest(req)
        joined = "\n".join(m.content for m in req.messages)
        if "Score:" in joined:
            content = self._score_reply(digest)
        else:
            content = self._dialogue_reply(digest, _pair_count_hint(req))
        return ChatResponse(
            content=content,
            finish_reason="stop",
            prompt_units=count_units(joined),
            output_units=count_units(content),
        )

    @staticmethod
    def _score_reply(digest: str) -> str:
        score = 1 + int(digest[:8], 16) % 10
        return (f"Score: {score}\n"
                f"回答与报告事实基本一致，论证编号{digest[:6]}，专业性与相关性符合该分档。")

    @staticmethod
    def _dialogue_reply(digest: str, pairs: int) -> str:
        lines = []
        for i in range(pairs):
            seed = hashlib.sha256(f"{digest}:{i}".encode()).hexdigest()
            topic = _MOCK_TOPICS[int(seed[:2], 16) % len(_MOCK_TOPICS)]
            angle = _MOCK_ANGLES[int(seed[2:4], 16) % len(_MOCK_ANGLES)]
            token = seed[4:10]
            lines.append(f"Q: 请问公司在{topic}方面的表现如何？{angle}是否构成风险（编号{token}）？")
            lines.append(f"A: 根据报告披露，公司{topic}保持稳健，{angle}方面的指标为{int(seed[10:14], 16) % 97}％，"
                         f"整体风险可控，建议关注后续季报（依据{token}）。")
        return "\n".join(lines)


def build_transport(base_url: str | None, api_key: str | None, timeout: float = 60.0):
    if base_url and base_url.startswith("mock://"):
        return MockTransport()
    if not base_url:
        return None
    return HttpTransport(base_url, api_key, timeout=timeout)
