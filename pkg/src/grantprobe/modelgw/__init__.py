from .api import ChatRequest, ChatResult, EmbeddingVector, EndpointConfig, Ledger
from .gateway import Gateway, chat_structured, extract_object, fan_out
from .transports import HttpTransport, MockTransport, TransientTransportError

__all__ = [
    "ChatRequest",
    "ChatResult",
    "EmbeddingVector",
    "EndpointConfig",
    "Gateway",
    "HttpTransport",
    "Ledger",
    "MockTransport",
    "TransientTransportError",
    "chat_structured",
    "extract_object",
    "fan_out",
]
