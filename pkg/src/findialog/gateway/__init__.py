from .cassette import Cassette
from .client import Gateway, GatewayConfig, TokenBucket
from .digest import canonical_serialization, request_digest
from .transport import HttpTransport, MockTransport, TransportCallError, build_transport
from .types import ChatMessage, ChatRequest, ChatResponse, request

__all__ = [
    "Cassette",
    "Gateway",
    "GatewayConfig",
    "TokenBucket",
    "canonical_serialization",
    "request_digest",
    "HttpTransport",
    "MockTransport",
    "TransportCallError",
    "build_transport",
    "ChatMessage",
    "ChatRequest",
    "ChatResponse",
    "request",
]
