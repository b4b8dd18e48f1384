"""Review record types shared by the three architectures."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

from ..corpus import SectionGroup


class ReviewSystem(str, enum.Enum):
    BASELINE = "baseline"
    SECTION_LEVEL = "section_level"
    COUNCIL = "council"


@dataclass(frozen=True)
class LedgerTotals:
    calls: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0
    wall_ms: int = 0

    def plus(self, prompt_tokens: int, completion_tokens: int, wall_ms: int) -> "LedgerTotals":
        return LedgerTotals(
            calls=self.calls + 1,
            prompt_tokens=self.prompt_tokens + prompt_tokens,
            completion_tokens=self.completion_tokens + completion_tokens,
            wall_ms=self.wall_ms + wall_ms,
        )


@dataclass(frozen=True)
class GroupReview:
    group: SectionGroup
    score: int
    explanation: str

    def __post_init__(self) -> None:
        if not 1 <= self.score <= 6:
            raise ValueError(f"group score must be in [1, 6], got {self.score}")


@dataclass(frozen=True)
class PersonaReview:
    persona: str
    score: int
    explanation: str


@dataclass(frozen=True)
class MetaReview:
    persona: str  # the reviewer doing the ranking
    text: str
    ranking: tuple[str, ...]  # anonymized labels, best to worst
    label_map: dict[str, str] = field(default_factory=dict)  # label -> persona id


@dataclass(frozen=True)
class CouncilTrace:
    persona_reviews: tuple[PersonaReview, ...]
    meta_reviews: tuple[MetaReview, ...]
    aggregate_order: tuple[str, ...]  # persona ids, best to worst
    chair_score: int
    chair_explanation: str


@dataclass(frozen=True)
class ReviewRecord:
    system: ReviewSystem
    target: str  # original proposal id or variant id
    run_index: int
    effort: str
    score: int
    explanation: str
    group_reviews: Optional[tuple[GroupReview, ...]] = None
    council: Optional[CouncilTrace] = None
    ledger: LedgerTotals = LedgerTotals()
    prompts: tuple[dict[str, str], ...] = ()  # verbatim audit trail

    def __post_init__(self) -> None:
        if not 1 <= self.score <= 6:
            raise ValueError(f"score must be in [1, 6], got {self.score}")
        if self.system is ReviewSystem.SECTION_LEVEL and self.group_reviews is None:
            raise ValueError("section-level records must carry group_reviews")
        if self.system is ReviewSystem.COUNCIL and self.council is None:
            raise ValueError("council records must carry a trace")
        if self.system is ReviewSystem.BASELINE and (
            self.group_reviews is not None or self.council is not None
        ):
            raise ValueError("baseline records carry neither groups nor a trace")


def record_to_dict(record: ReviewRecord) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "system": record.system.value,
        "target": record.target,
        "run_index": record.run_index,
        "effort": record.effort,
        "score": record.score,
        "explanation": record.explanation,
        "group_reviews": None,
        "council": None,
        "ledger": {
            "calls": record.ledger.calls,
            "prompt_tokens": record.ledger.prompt_tokens,
            "completion_tokens": record.ledger.completion_tokens,
            "wall_ms": record.ledger.wall_ms,
        },
        "prompts": list(record.prompts),
    }
    if record.group_reviews is not None:
        doc["group_reviews"] = [
            {"group": g.group.value, "score": g.score, "explanation": g.explanation}
            for g in record.group_reviews
        ]
    if record.council is not None:
        c = record.council
        doc["council"] = {
            "persona_reviews": [
                {"persona": p.persona, "score": p.score, "explanation": p.explanation}
                for p in c.persona_reviews
            ],
            "meta_reviews": [
                {
                    "persona": m.persona,
                    "text": m.text,
                    "ranking": list(m.ranking),
                    "label_map": dict(sorted(m.label_map.items())),
                }
                for m in c.meta_reviews
            ],
            "aggregate_order": list(c.aggregate_order),
            "chair_score": c.chair_score,
            "chair_explanation": c.chair_explanation,
        }
    return doc


def record_from_dict(doc: dict[str, Any]) -> ReviewRecord:
    group_reviews = None
    if doc.get("group_reviews") is not None:
        group_reviews = tuple(
            GroupReview(
                group=SectionGroup(g["group"]), score=g["score"], explanation=g["explanation"]
            )
            for g in doc["group_reviews"]
        )
    council = None
    if doc.get("council") is not None:
        c = doc["council"]
        council = CouncilTrace(
            persona_reviews=tuple(
                PersonaReview(**p) for p in c["persona_reviews"]
            ),
            meta_reviews=tuple(
                MetaReview(
                    persona=m["persona"],
                    text=m["text"],
                    ranking=tuple(m["ranking"]),
                    label_map=dict(m.get("label_map", {})),
                )
                for m in c["meta_reviews"]
            ),
            aggregate_order=tuple(c["aggregate_order"]),
            chair_score=c["chair_score"],
            chair_explanation=c["chair_explanation"],
        )
    ledger = doc.get("ledger", {})
    return ReviewRecord(
        system=ReviewSystem(doc["system"]),
        target=doc["target"],
        run_index=doc["run_index"],
        effort=doc["effort"],
        score=doc["score"],
        explanation=doc["explanation"],
        group_reviews=group_reviews,
        council=council,
        ledger=LedgerTotals(
            calls=ledger.get("calls", 0),
            prompt_tokens=ledger.get("prompt_tokens", 0),
            completion_tokens=ledger.get("completion_tokens", 0),
            wall_ms=ledger.get("wall_ms", 0),
        ),
        prompts=tuple(doc.get("prompts", ())),
    )
