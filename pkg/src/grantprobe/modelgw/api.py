"""Request/result types and the token/time ledger."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class EndpointConfig:
    name: str  # e.g. "reviewer", "judge-a", "embedder"
    model: str
    base_url: str = ""
    api_key: str = ""
    supports_effort: bool = True


@dataclass(frozen=True)
class ChatRequest:
    system_text: str
    user_text: str
    effort: str = "medium"  # low | medium | high
    want_structured: bool = False
    temperature: float = 0.0
    seed: Optional[int] = None
    max_output_tokens: int = 4096

    def __post_init__(self) -> None:
        if self.effort not in ("low", "medium", "high"):
            raise ValueError(f"effort must be low|medium|high, got {self.effort!r}")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class ChatResult:
    text: str
    prompt_tokens: int
    completion_tokens: int
    wall_ms: int
    transport_attempts: int

    def __post_init__(self) -> None:
        if min(self.prompt_tokens, self.completion_tokens, self.wall_ms) < 0:
            raise ValueError("token counts and wall_ms must be >= 0")


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    model_id: str


@dataclass
class Ledger:
    """Thread-safe accumulation of per-call accounting."""

    entries: list[dict] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add(
        self,
        endpoint: str,
        stage: str,
        prompt_tokens: int,
        completion_tokens: int,
        wall_ms: int,
        attempts: int,
        effort_applied: bool,
    ) -> None:
        with self._lock:
            self.entries.append(
                {
                    "endpoint": endpoint,
                    "stage": stage,
                    "prompt_tokens": prompt_tokens,
                    "completion_tokens": completion_tokens,
                    "wall_ms": wall_ms,
                    "attempts": attempts,
                    "effort_applied": effort_applied,
                }
            )

    def totals(self) -> dict:
        with self._lock:
            return {
                "calls": len(self.entries),
                "prompt_tokens": sum(e["prompt_tokens"] for e in self.entries),
                "completion_tokens": sum(e["completion_tokens"] for e in self.entries),
                "total_tokens": sum(
                    e["prompt_tokens"] + e["completion_tokens"] for e in self.entries
                ),
                "wall_ms": sum(e["wall_ms"] for e in self.entries),
            }

    def stage_totals(self) -> dict[str, dict]:
        with self._lock:
            stages: dict[str, dict] = {}
            for e in self.entries:
                s = stages.setdefault(
                    e["stage"],
                    {"calls": 0, "prompt_tokens": 0, "completion_tokens": 0, "wall_ms": 0},
                )
                s["calls"] += 1
                s["prompt_tokens"] += e["prompt_tokens"]
                s["completion_tokens"] += e["completion_tokens"]
                s["wall_ms"] += e["wall_ms"]
            return stages
