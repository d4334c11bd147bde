"""Gateway client: modes, retries, rate limiting, concurrency gating.

Live calls retry transient failures with exponential full-jitter backoff
(default 5 attempts, base 1s, factor 2) and are gated by an optional
token-bucket limiter plus a max-concurrency semaphore. Replay never touches
the network. The client is safe to share across threads.
"""

from __future__ import annotations

import logging
import os
import random
import threading
import time
from dataclasses import dataclass
from typing import Callable, Optional

from ..errors import RateLimitedExhausted, TransportError
from .cassette import Cassette
from .digest import request_digest
from .transport import TransportCallError, build_transport
from .types import ChatRequest, ChatResponse

log = logging.getLogger(__name__)

MODES = ("live", "record", "replay", "replay_or_live")


@dataclass
class GatewayConfig:
    base_url: Optional[str] = None      # falls back to $LLM_API_BASE
    api_key: Optional[str] = None       # falls back to $LLM_API_KEY
    max_attempts: int = 5
    base_delay: float = 1.0
    backoff_factor: float = 2.0
    max_concurrency: int = 8
    rate_capacity: Optional[float] = None   # tokens; None disables the bucket
    rate_refill: float = 1.0                # tokens per second
    timeout: float = 60.0

    def resolved_base_url(self) -> Optional[str]:
        return self.base_url or os.environ.get("LLM_API_BASE")

    def resolved_api_key(self) -> Optional[str]:
        return self.api_key or os.environ.get("LLM_API_KEY")


class TokenBucket:
    """Blocking token bucket; one token per live request."""

    def __init__(self, capacity: float, refill_per_s: float,
                 clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        self.capacity = float(capacity)
        self.refill_per_s = float(refill_per_s)
        self._clock = clock
        self._sleep = sleep
        self._tokens = float(capacity)
        self._stamp = clock()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                self._tokens = min(self.capacity, self._tokens + (now - self._stamp) * self.refill_per_s)
                self._stamp = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.refill_per_s
            self._sleep(wait)


class Gateway:
    def __init__(self, config: GatewayConfig | None = None,
                 cassette: Cassette | None = None,
                 transport: Callable[[ChatRequest], ChatResponse] | None = None,
                 sleep: Callable[[float], None] = time.sleep,
                 jitter_rng: random.Random | None = None):
        self.config = config or GatewayConfig()
        self.cassette = cassette if cassette is not None else Cassette(None)
        self._transport = transport
        self._sleep = sleep
        self._jitter = jitter_rng or random.Random()
        self._semaphore = threading.BoundedSemaphore(self.config.max_concurrency)
        self._bucket = None
        if self.config.rate_capacity is not None:
            self._bucket = TokenBucket(self.config.rate_capacity, self.config.rate_refill, sleep=sleep)

    def _resolve_transport(self) -> Callable[[ChatRequest], ChatResponse]:
        if self._transport is None:
            base = self.config.resolved_base_url()
            self._transport = build_transport(base, self.config.resolved_api_key(),
                                              timeout=self.config.timeout)
        if self._transport is None:
            raise TransportError("no endpoint configured: set LLM_API_BASE or pass a transport")
        return self._transport

    def complete(self, req: ChatRequest, mode: str = "replay") -> ChatResponse:
        if mode not in MODES:
            raise ValueError(f"bad mode: {mode!r}")
        digest = request_digest(req)
        if mode == "replay":
            return self.cassette.lookup(digest)
        if mode == "replay_or_live":
            if digest in self.cassette:
                return self.cassette.lookup(digest)
            response = self._live(req)
            self.cassette.record(digest, response)
            return response
        response = self._live(req)
        if mode == "record":
            self.cassette.record(digest, response)
        return response

    def _live(self, req: ChatRequest) -> ChatResponse:
        transport = self._resolve_transport()
        if self._bucket is not None:
            self._bucket.acquire()
        last: TransportCallError | None = None
        for attempt in range(self.config.max_attempts):
            if attempt > 0:
                # full jitter: uniform over [0, base * factor^(attempt-1)]
                ceiling = self.config.base_delay * self.config.backoff_factor ** (attempt - 1)
                self._sleep(self._jitter.uniform(0.0, ceiling))
            with self._semaphore:
                try:
                    return transport(req)
                except TransportCallError as exc:
                    last = exc
                    if not exc.retryable:
                        raise TransportError(str(exc)) from exc
                    log.warning("transient %s on attempt %d/%d (tag=%s): %s",
                                exc.kind, attempt + 1, self.config.max_attempts, req.tag, exc)
        assert last is not None
        if last.kind == "rate_limit":
            raise RateLimitedExhausted(f"retries exhausted: {last}") from last
        raise TransportError(f"retries exhausted: {last}") from last
