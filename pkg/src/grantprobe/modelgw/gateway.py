"""Gateway: retries, accounting, structured-output extraction."""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence, TypeVar

from ..errors import MissingField, NoObjectFound, TransportExhausted
from .api import ChatRequest, ChatResult, EmbeddingVector, EndpointConfig, Ledger
from .transports import Transport, TransientTransportError

T = TypeVar("T")


class Gateway:
    """Uniform access to chat and embedding endpoints.

    Shareable across workers; ledger updates are atomic and results never
    depend on completion order.
    """

    def __init__(
        self,
        transport: Transport,
        retry_cap: int = 3,
        backoff_base_ms: int = 250,
        embed_batch_size: int = 64,
        ledger: Optional[Ledger] = None,
    ):
        self.transport = transport
        self.retry_cap = retry_cap
        self.backoff_base_ms = backoff_base_ms
        self.embed_batch_size = embed_batch_size
        self.ledger = ledger if ledger is not None else Ledger()

    def _with_retries(self, call: Callable[[], T], who: str) -> tuple[T, int]:
        """(result, attempts); transient failures retried with doubling backoff.

        ``retry_cap`` bounds total attempts, so attempts <= retry_cap always.
        """
        attempts = 0
        delay_ms = self.backoff_base_ms
        while True:
            attempts += 1
            try:
                return call(), attempts
            except TransientTransportError as exc:
                if attempts >= self.retry_cap:
                    raise TransportExhausted(
                        f"{who}: retries spent after {attempts} attempts: {exc}"
                    ) from exc
                time.sleep(delay_ms / 1000.0)
                delay_ms *= 2  # non-decreasing backoff

    def chat(self, endpoint: EndpointConfig, req: ChatRequest, stage: str = "chat") -> ChatResult:
        started = time.monotonic()
        raw, attempts = self._with_retries(
            lambda: self.transport.chat(endpoint, req), endpoint.name
        )
        wall_ms = raw.wall_ms
        if wall_ms is None:
            wall_ms = int((time.monotonic() - started) * 1000)
        result = ChatResult(
            text=raw.text,
            prompt_tokens=raw.prompt_tokens,
            completion_tokens=raw.completion_tokens,
            wall_ms=wall_ms,
            transport_attempts=attempts,
        )
        self.ledger.add(
            endpoint=endpoint.name,
            stage=stage,
            prompt_tokens=result.prompt_tokens,
            completion_tokens=result.completion_tokens,
            wall_ms=result.wall_ms,
            attempts=attempts,
            effort_applied=endpoint.supports_effort,
        )
        return result

    def embed(
        self, endpoint: EndpointConfig, texts: Sequence[str], stage: str = "embed"
    ) -> list[EmbeddingVector]:
        if not texts:
            raise ValueError("texts must be non-empty")
        vectors: list[EmbeddingVector] = []
        for i in range(0, len(texts), self.embed_batch_size):
            batch = list(texts[i : i + self.embed_batch_size])
            raw, _ = self._with_retries(
                lambda b=batch: self.transport.embed(endpoint, b), endpoint.name
            )
            vectors.extend(
                EmbeddingVector(values=tuple(v), model_id=endpoint.model) for v in raw
            )
        return vectors


def extract_object(text: str, required_fields: Sequence[str]) -> dict:
    """First well-formed JSON object in ``text`` containing all required
    fields; surrounding prose is ignored."""
    decoder = json.JSONDecoder()
    missing_seen: str | None = None
    found_any = False
    idx = text.find("{")
    while idx != -1:
        try:
            obj, _ = decoder.raw_decode(text[idx:])
        except json.JSONDecodeError:
            idx = text.find("{", idx + 1)
            continue
        if isinstance(obj, dict):
            found_any = True
            missing = [f for f in required_fields if f not in obj]
            if not missing:
                return obj
            if missing_seen is None:
                missing_seen = missing[0]
        idx = text.find("{", idx + 1)
    if found_any and missing_seen is not None:
        raise MissingField(missing_seen)
    raise NoObjectFound("no JSON object found in response")


REPAIR_SUFFIX = (
    "\n\nYour previous response could not be parsed ({error}). "
    "Respond again, following the required format exactly."
)


def chat_structured(
    gateway: Gateway,
    endpoint: EndpointConfig,
    req: ChatRequest,
    required_fields: Sequence[str],
    stage: str = "chat",
) -> tuple[dict, ChatResult]:
    """Chat with one bounded self-repair on schema failure."""
    result = gateway.chat(endpoint, req, stage=stage)
    try:
        return extract_object(result.text, required_fields), result
    except (NoObjectFound, MissingField) as exc:
        repair = ChatRequest(
            system_text=req.system_text,
            user_text=req.user_text + REPAIR_SUFFIX.format(error=exc),
            effort=req.effort,
            want_structured=req.want_structured,
            temperature=req.temperature,
            seed=req.seed,
            max_output_tokens=req.max_output_tokens,
        )
        result = gateway.chat(endpoint, repair, stage=stage)
        return extract_object(result.text, required_fields), result


def fan_out(tasks: Sequence[Callable[[], T]], max_workers: int = 1) -> list[T]:
    """Run tasks, preserving input order in the results."""
    if max_workers <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]
