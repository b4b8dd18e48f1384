"""Perturbation axes, transform kinds, and spec/variant records."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

from ..corpus import DiffText, ProposalBundle, SectionKind


class Axis(str, enum.Enum):
    FUNDING = "funding"
    TIMELINE = "timeline"
    COMPETENCY = "competency"
    ALIGNMENT = "alignment"
    CLARITY = "clarity"
    IMPACT = "impact"


class TransformKind(str, enum.Enum):
    BRACKET_REMOVAL = "bracket_removal"
    BRACKET_AND_EXAMPLE_REMOVAL = "bracket_and_example_removal"
    NUMERICAL_DEQUANTIFICATION = "numerical_dequantification"
    EXISTING_WORK_FRAMING = "existing_work_framing"
    METHODOLOGICAL_REDUCTION = "methodological_reduction"
    CONNECTIVE_REMOVAL = "connective_removal"
    ACRONYM_UNEXPANSION = "acronym_unexpansion"
    NOVELTY_MARKER_REMOVAL = "novelty_marker_removal"
    FACTUAL_BACKGROUND_DELETION = "factual_background_deletion"
    COMPETENCY_EVIDENCE_REMOVAL = "competency_evidence_removal"
    PERSONNEL_REPLACEMENT = "personnel_replacement"
    BUDGET_VARIANT = "budget_variant"
    FTE_CHANGE = "fte_change"
    COST_JUSTIFICATION_REMOVAL = "cost_justification_removal"
    TIMELINE_STRETCH = "timeline_stretch"
    TIMELINE_COMPRESS = "timeline_compress"
    MILESTONE_SHUFFLE = "milestone_shuffle"
    OPPORTUNITY_AIMS_EDIT = "opportunity_aims_edit"
    LOOKING_FOR_SWAP = "looking_for_swap"
    CROSS_CUTTING_THEME_INJECTION = "cross_cutting_theme_injection"
    IMPACT_SCOPE_SHIFT = "impact_scope_shift"
    STAKEHOLDER_SWAP = "stakeholder_swap"
    OUTCOME_REMOVAL = "outcome_removal"
    TIMELINESS_REMOVAL = "timeliness_removal"


@dataclass(frozen=True)
class TargetScope:
    """Where a transform is allowed to touch a bundle."""

    section_kinds: frozenset[SectionKind] = frozenset()
    budget: bool = False
    gantt: bool = False
    opportunity: bool = False

    def describe(self) -> str:
        parts = sorted(k.value for k in self.section_kinds)
        if self.budget:
            parts.append("budget")
        if self.gantt:
            parts.append("gantt")
        if self.opportunity:
            parts.append("opportunity")
        return "+".join(parts) if parts else "none"


def sections_scope(*kinds: SectionKind) -> TargetScope:
    return TargetScope(section_kinds=frozenset(kinds))


BUDGET_SCOPE = TargetScope(budget=True)
GANTT_SCOPE = TargetScope(gantt=True)
OPPORTUNITY_SCOPE = TargetScope(opportunity=True)


@dataclass(frozen=True)
class PerturbationSpec:
    id: str
    axis: Axis
    kind: TransformKind
    judge_description: str  # human-authored prose, given verbatim to judges
    scope: TargetScope
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.judge_description.strip():
            raise ValueError(f"spec {self.id}: judge_description must be non-empty")


class Applicability(str, enum.Enum):
    APPLIED = "applied"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class PerturbedVariant:
    base_proposal_id: str
    perturbation_id: str
    bundle: Optional[ProposalBundle]
    diff: Optional[DiffText]
    applicability: Applicability
    reason: str = ""  # machine-readable, set when not applicable

    @property
    def variant_id(self) -> str:
        return f"{self.base_proposal_id}::{self.perturbation_id}"
