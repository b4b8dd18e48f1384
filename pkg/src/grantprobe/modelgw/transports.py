"""HTTP and mock transports behind the gateway.

The mock transport keeps the whole pipeline runnable offline: it routes on
prompt markers and synthesizes plausible, fully deterministic responses
(scores, rankings, verdicts, claim decompositions, embeddings), so repeated
runs with the same seed are byte-identical.
"""
from __future__ import annotations

import hashlib
import json
import math
import re
from typing import Iterable, Optional, Protocol, Sequence

import requests

from ..errors import ContextOverflow, DimensionMismatch
from .api import ChatRequest, EndpointConfig


class TransientTransportError(Exception):
    """Retryable failure (rate limit, 5xx, timeout)."""


class RawChatResponse:
    def __init__(self, text: str, prompt_tokens: int, completion_tokens: int,
                 wall_ms: Optional[int] = None):
        self.text = text
        self.prompt_tokens = prompt_tokens
        self.completion_tokens = completion_tokens
        self.wall_ms = wall_ms


class Transport(Protocol):
    def chat(self, endpoint: EndpointConfig, req: ChatRequest) -> RawChatResponse: ...

    def embed(self, endpoint: EndpointConfig, texts: Sequence[str]) -> list[list[float]]: ...


# -- HTTP ---------------------------------------------------------------------


class HttpTransport:
    """OpenAI-compatible chat-completions and embeddings over HTTP."""

    def __init__(self, timeout_s: float = 120.0, session: Optional[requests.Session] = None):
        self.timeout_s = timeout_s
        self.session = session or requests.Session()

    def _headers(self, endpoint: EndpointConfig) -> dict:
        headers = {"Content-Type": "application/json"}
        if endpoint.api_key:
            headers["Authorization"] = f"Bearer {endpoint.api_key}"
        return headers

    def chat(self, endpoint: EndpointConfig, req: ChatRequest) -> RawChatResponse:
        payload: dict = {
            "model": endpoint.model,
            "messages": [
                {"role": "system", "content": req.system_text},
                {"role": "user", "content": req.user_text},
            ],
            "temperature": req.temperature,
            "max_tokens": req.max_output_tokens,
        }
        if req.seed is not None:
            payload["seed"] = req.seed
        if endpoint.supports_effort:
            payload["reasoning_effort"] = req.effort
        try:
            resp = self.session.post(
                f"{endpoint.base_url.rstrip('/')}/chat/completions",
                json=payload,
                headers=self._headers(endpoint),
                timeout=self.timeout_s,
            )
        except requests.RequestException as exc:
            raise TransientTransportError(str(exc)) from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientTransportError(f"HTTP {resp.status_code}")
        if resp.status_code == 400 and "context" in resp.text.lower():
            raise ContextOverflow(resp.text[:500])
        resp.raise_for_status()
        data = resp.json()
        usage = data.get("usage", {})
        return RawChatResponse(
            text=data["choices"][0]["message"]["content"],
            prompt_tokens=int(usage.get("prompt_tokens", 0)),
            completion_tokens=int(usage.get("completion_tokens", 0)),
        )

    def embed(self, endpoint: EndpointConfig, texts: Sequence[str]) -> list[list[float]]:
        try:
            resp = self.session.post(
                f"{endpoint.base_url.rstrip('/')}/embeddings",
                json={"model": endpoint.model, "input": list(texts)},
                headers=self._headers(endpoint),
                timeout=self.timeout_s,
            )
        except requests.RequestException as exc:
            raise TransientTransportError(str(exc)) from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientTransportError(f"HTTP {resp.status_code}")
        resp.raise_for_status()
        rows = sorted(resp.json()["data"], key=lambda d: d["index"])
        vectors = [list(map(float, row["embedding"])) for row in rows]
        if len({len(v) for v in vectors}) > 1:
            raise DimensionMismatch("endpoint returned ragged vectors")
        return vectors


# -- mock ---------------------------------------------------------------------


def stable_hash(text: str) -> int:
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


_NEGATIVE_WORDS = (
    "not ", "no ", "lacks", "lacking", "weak", "unclear", "unconvincing",
    "insufficient", "missing", "fails", "unrealistic", "excessive",
    "unjustified", "concern", "risky", "overstated", "poorly", "cannot",
)
_POSITIVE_WORDS = (
    "strong", "well", "excellent", "clear", "good", "convincing", "sound",
    "thorough", "credible", "impressive", "appropriate", "realistic",
)


def _mock_valence(sentence: str) -> str:
    s = sentence.lower()
    neg = any(w in s for w in _NEGATIVE_WORDS)
    pos = any(w in s for w in _POSITIVE_WORDS)
    if neg and not pos:
        return "negative"
    if pos and not neg:
        return "positive"
    return "neutral"


_REVIEW_SENTENCE_BANK = (
    "The vision is clearly articulated and the approach is methodologically sound.",
    "The budget allocation is not convincingly justified against the stated activities.",
    "The timeline appears unrealistic for the scale of the proposed workpackages.",
    "The team demonstrates strong expertise relevant to the core objectives.",
    "The proposal lacks detail on how data management and ethics risks are handled.",
    "The impact pathway is credible and engages an appropriate set of stakeholders.",
    "Several key terms are unclear and background assumptions are not explained.",
    "The alignment with the funding call's stated priorities is strong.",
    "The resource request is proportionate and offers good value for money.",
    "Milestones are poorly sequenced relative to the dependencies between tasks.",
)


class MockTransport:
    """Deterministic offline stand-in for model endpoints.

    mode="router" synthesizes responses keyed on prompt markers; mode="echo"
    returns the user text verbatim.  ``failures`` injects transient failures
    consumed before the next successful call.
    """

    def __init__(self, mode: str = "router", failures: Optional[Iterable[int]] = None,
                 scripted: Optional[Iterable[str]] = None, embed_dim: int = 64):
        self.mode = mode
        self._failures = list(failures or [])
        self._scripted = list(scripted or [])
        self.embed_dim = embed_dim

    # -- chat -------------------------------------------------------------

    def chat(self, endpoint: EndpointConfig, req: ChatRequest) -> RawChatResponse:
        if self._failures:
            code = self._failures.pop(0)
            raise TransientTransportError(f"injected HTTP {code}")
        if self._scripted:
            text = self._scripted.pop(0)
        elif self.mode == "echo":
            text = req.user_text
        else:
            text = self._route(endpoint, req)
        prompt_tokens = (len(req.system_text) + len(req.user_text)) // 4
        completion_tokens = max(1, len(text) // 4)
        wall_ms = 5 + (prompt_tokens + completion_tokens) // 10
        return RawChatResponse(text, prompt_tokens, completion_tokens, wall_ms=wall_ms)

    def _key(self, endpoint: EndpointConfig, req: ChatRequest, salt: str = "") -> int:
        return stable_hash(
            f"{endpoint.model}|{req.seed}|{salt}|{req.system_text}|{req.user_text}"
        )

    def _route(self, endpoint: EndpointConfig, req: ChatRequest) -> str:
        user = req.user_text
        if "Award exactly one label" in user:
            verdict = ("C", "P", "I")[self._key(endpoint, req, "verdict") % 3]
            return json.dumps(
                {
                    "explanation": "The review text was checked against the "
                    "described change and the file diff.",
                    "verdict": verdict,
                }
            )
        if "Your task as Chairman" in user:
            h = self._key(endpoint, req, "score")
            return json.dumps(
                {
                    "score": 1 + h % 6,
                    "explanation": "Synthesis of the council's reviews, weighted "
                    "by the peer rankings. "
                    + _REVIEW_SENTENCE_BANK[h % len(_REVIEW_SENTENCE_BANK)],
                }
            )
        if "Your final ranking MUST be formatted EXACTLY" in user:
            labels = re.findall(r"^### Review ([A-Z])$", user, re.MULTILINE)
            h = self._key(endpoint, req, "ranking")
            ordered = sorted(labels, key=lambda x: stable_hash(f"{h}:{x}"))
            lines = [f"{i + 1}. Review {lab}" for i, lab in enumerate(ordered)]
            return (
                "Each review was weighed on specificity and evidence use.\n\n"
                "FINAL RANKING:\n" + "\n".join(lines)
            )
        if "atomic review claims" in user:
            return self._decompose(user)
        if "Respond with exactly one category" in user:
            return self._classify(user)
        if "three-word aspect" in user:
            return self._aspect(user)
        if "EXACT, DIFFERENT or CONTRADICTION" in user:
            return self._relation(user)
        if '"score"' in user:
            h = self._key(endpoint, req, "score")
            score = 1 + h % 6
            picks = [
                _REVIEW_SENTENCE_BANK[(h // (13 + i)) % len(_REVIEW_SENTENCE_BANK)]
                for i in range(3)
            ]
            explanation = " ".join(dict.fromkeys(picks))
            return json.dumps({"score": score, "explanation": explanation})
        return req.user_text

    def _decompose(self, user: str) -> str:
        review = user.split("## Review\n", 1)[-1]
        claims = []
        for sentence in re.split(r"(?<=[.!?])\s+", review.strip()):
            sentence = sentence.strip()
            if not sentence:
                continue
            parts = re.split(r",? but ", sentence) if " but " in sentence else [sentence]
            for part in parts:
                part = part.strip().rstrip(".") + "."
                claims.append(
                    {
                        "source_sentence": sentence,
                        "text": part[0].upper() + part[1:],
                        "valence": _mock_valence(part),
                    }
                )
        return json.dumps(claims)

    _CATEGORY_KEYWORDS = (
        ("Funding", ("budget", "cost", "travel", "funding", "resource", "money", "equipment")),
        ("Timeline", ("timeline", "milestone", "month", "schedule", "gantt", "sequenc")),
        ("Ethics", ("ethic", "data management", "privacy", "consent", "rri", "governance")),
        ("Competency", ("team", "expertise", "track record", "skill", "investigator", "personnel")),
        ("Alignment", ("alignment", "call", "remit", "scope", "priorit", "fit")),
        ("Impact", ("impact", "stakeholder", "benefit", "dissemination", "pathway", "outcome")),
        ("Clarity", ("clear", "unclear", "clarity", "acronym", "novel", "method", "vision", "explain")),
    )

    def _classify(self, user: str) -> str:
        claim = user.split("## Claim\n", 1)[-1].lower()
        for category, keywords in self._CATEGORY_KEYWORDS:
            if any(k in claim for k in keywords):
                return category
        return "Clarity"

    def _aspect(self, user: str) -> str:
        cluster = user.split("## Claims\n", 1)[-1].lower()
        words = [
            w for w in re.findall(r"[a-z]{4,}", cluster)
            if w not in ("this", "that", "with", "from", "have", "been", "were", "will")
        ]
        out: list[str] = []
        for w in words:
            if w not in out:
                out.append(w)
            if len(out) == 3:
                break
        return " ".join(out) if out else "general quality remark"

    def _relation(self, user: str) -> str:
        valences = re.findall(r"valence: (\w+)", user)
        if len(valences) >= 2:
            a, b = valences[0], valences[1]
            if a == b:
                return "EXACT"
            if {a, b} == {"positive", "negative"}:
                return "CONTRADICTION"
        return "DIFFERENT"

    # -- embeddings ---------------------------------------------------------

    def embed(self, endpoint: EndpointConfig, texts: Sequence[str]) -> list[list[float]]:
        if self._failures:
            code = self._failures.pop(0)
            raise TransientTransportError(f"injected HTTP {code}")
        vectors = []
        for text in texts:
            vec = [0.0] * self.embed_dim
            for token in re.findall(r"[a-z0-9]+", text.lower()):
                idx = stable_hash(f"{endpoint.model}:{token}") % self.embed_dim
                vec[idx] += 1.0
            norm = math.sqrt(sum(v * v for v in vec)) or 1.0
            vectors.append([v / norm for v in vec])
        return vectors
