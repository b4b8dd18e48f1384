"""Claim, relation, and report types for review-feedback alignment."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Optional


class Valence(str, enum.Enum):
    POSITIVE = "positive"
    NEUTRAL = "neutral"
    NEGATIVE = "negative"


class TaxonomyCategory(str, enum.Enum):
    COMPETENCY = "Competency"
    FUNDING = "Funding"
    TIMELINE = "Timeline"
    ALIGNMENT = "Alignment"
    CLARITY = "Clarity"
    IMPACT = "Impact"
    ETHICS = "Ethics"


class Relation(str, enum.Enum):
    EXACT = "EXACT"  # same topic, same valence
    DIFFERENT = "DIFFERENT"  # partial topical overlap
    CONTRADICTION = "CONTRADICTION"  # same topic, opposing valence


@dataclass(frozen=True)
class Claim:
    claim_id: str
    source: str  # human reviewer id or a ReviewSystem value
    proposal_id: str
    source_sentence: str
    text: str
    valence: Valence
    category: Optional[TaxonomyCategory] = None
    aspect: Optional[str] = None  # <= 3 words once assigned
    cluster_id: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("claim text must be non-empty")
        if self.aspect is not None and len(self.aspect.split()) > 3:
            raise ValueError(f"aspect must be at most 3 words: {self.aspect!r}")

    def with_category(self, category: TaxonomyCategory) -> "Claim":
        return replace(self, category=category)

    def with_aspect(self, aspect: str) -> "Claim":
        return replace(self, aspect=aspect)

    def with_cluster(self, cluster_id: str) -> "Claim":
        return replace(self, cluster_id=cluster_id)


@dataclass(frozen=True)
class MatchRecord:
    claim_id: str
    direction: str  # "A->B" or "B->A"
    candidates: tuple[tuple[str, float], ...]  # (candidate claim id, similarity)
    relation: Optional[Relation] = None  # None when the claim is exclusive
    threshold: float = 0.5

    def __post_init__(self) -> None:
        for _, sim in self.candidates:
            if sim < self.threshold:
                raise ValueError("candidate similarity below the threshold used")

    @property
    def exclusive(self) -> bool:
        return not self.candidates


@dataclass
class ExclusivityRow:
    source: str
    category: str
    total: int
    exclusive: int
    contradictions: int

    @property
    def retained_rate(self) -> float:
        return self.exclusive / self.total if self.total else 0.0

    @property
    def contradiction_rate(self) -> float:
        return self.contradictions / self.total if self.total else 0.0


@dataclass
class ExclusivityReport:
    rows: list[ExclusivityRow]
    valence_histograms: dict[str, dict[str, float]]  # source -> valence -> fraction
    source_totals: dict[str, dict[str, Any]] = field(default_factory=dict)

    def to_record(self) -> dict[str, Any]:
        return {
            "rows": [
                {
                    "source": r.source,
                    "category": r.category,
                    "total": r.total,
                    "exclusive": r.exclusive,
                    "contradictions": r.contradictions,
                    "retained_rate": r.retained_rate,
                    "contradiction_rate": r.contradiction_rate,
                    # denominator variant: share of the source's full claim set
                    "retained_rate_source_denominator": (
                        r.exclusive / self.source_totals[r.source]["total"]
                        if self.source_totals.get(r.source, {}).get("total")
                        else 0.0
                    ),
                }
                for r in self.rows
            ],
            "source_totals": self.source_totals,
            "valence_histograms": self.valence_histograms,
        }


def claim_to_dict(claim: Claim) -> dict[str, Any]:
    return {
        "claim_id": claim.claim_id,
        "source": claim.source,
        "proposal_id": claim.proposal_id,
        "source_sentence": claim.source_sentence,
        "text": claim.text,
        "valence": claim.valence.value,
        "category": claim.category.value if claim.category else None,
        "aspect": claim.aspect,
        "cluster_id": claim.cluster_id,
    }


def claim_from_dict(doc: dict[str, Any]) -> Claim:
    return Claim(
        claim_id=doc["claim_id"],
        source=doc["source"],
        proposal_id=doc["proposal_id"],
        source_sentence=doc["source_sentence"],
        text=doc["text"],
        valence=Valence(doc["valence"]),
        category=TaxonomyCategory(doc["category"]) if doc.get("category") else None,
        aspect=doc.get("aspect"),
        cluster_id=doc.get("cluster_id"),
    )
