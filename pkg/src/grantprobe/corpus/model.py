"""Structured representation of a proposal and its funding opportunity."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .kinds import SectionKind


@dataclass(frozen=True)
class Section:
    kind: SectionKind
    heading: str
    body: str  # markdown; emphasis and header nesting preserved from input
    ordinal: int

    def with_body(self, body: str) -> "Section":
        return replace(self, body=body)


@dataclass(frozen=True)
class GanttTable:
    """Project timeline as a markdown-friendly matrix.

    ``tasks`` maps a row label to its cells, one per period; a True cell is
    shaded (serialized as the literal ``####``), a False cell is blank.
    """

    tasks: tuple[tuple[str, tuple[bool, ...]], ...]
    periods: tuple[str, ...]
    label_header: str = "Task"

    def __post_init__(self) -> None:
        for label, cells in self.tasks:
            if len(cells) != len(self.periods):
                raise ValueError(
                    f"row {label!r} has {len(cells)} cells, expected {len(self.periods)}"
                )

    def span(self, label: str) -> tuple[int, int] | None:
        """(first, last) shaded period indices for a task, or None if unshaded."""
        for task_label, cells in self.tasks:
            if task_label == label:
                shaded = [i for i, c in enumerate(cells) if c]
                if not shaded:
                    return None
                return (shaded[0], shaded[-1])
        raise KeyError(label)


@dataclass(frozen=True)
class BudgetTable:
    """Summary-of-resources table in whole pounds."""

    full_funding: int
    org_contribution: int
    applied: int
    da_staff: int
    da_estates: int
    da_other: int
    fte_percent: float
    di_staff: int
    di_equipment: int
    di_travel: int
    di_other: int

    def __post_init__(self) -> None:
        currency = (
            self.full_funding, self.org_contribution, self.applied,
            self.da_staff, self.da_estates, self.da_other,
            self.di_staff, self.di_equipment, self.di_travel, self.di_other,
        )
        if any(v < 0 for v in currency):
            raise ValueError("currency fields must be >= 0")
        if not 0 <= self.fte_percent <= 100:
            raise ValueError("fte_percent must be in [0, 100]")
        if self.applied != self.full_funding - self.org_contribution:
            raise ValueError(
                "applied must equal full_funding - org_contribution "
                f"({self.applied} != {self.full_funding} - {self.org_contribution})"
            )


@dataclass(frozen=True)
class Opportunity:
    call_id: str
    aims: str
    looking_for: str  # the "What we're looking for" text
    guidelines: str  # reviewer guidance, including the 1-6 scale

    def __post_init__(self) -> None:
        for name in ("call_id", "aims", "looking_for", "guidelines"):
            if not getattr(self, name).strip():
                raise ValueError(f"opportunity field {name} must be non-empty")


@dataclass(frozen=True)
class ProposalBundle:
    proposal_id: str
    sections: tuple[Section, ...]
    opportunity: Opportunity
    gantt: Optional[GanttTable] = None
    budget: Optional[BudgetTable] = None
    provenance: dict[str, str] = field(default_factory=dict)  # label -> sha256

    def __post_init__(self) -> None:
        ordinals = [s.ordinal for s in self.sections]
        if ordinals != list(range(len(ordinals))):
            raise ValueError("section ordinals must be dense and in document order")

    def section(self, kind: SectionKind) -> Optional[Section]:
        for s in self.sections:
            if s.kind == kind:
                return s
        return None

    def replace_section(self, ordinal: int, body: str) -> "ProposalBundle":
        sections = tuple(
            s.with_body(body) if s.ordinal == ordinal else s for s in self.sections
        )
        return replace(self, sections=sections)


@dataclass(frozen=True)
class DiffText:
    """Unified diff (3 context lines) between two serialized documents."""

    text: str
    files: tuple[tuple[str, str], ...]  # (file label, hunk text) pairs

    @property
    def is_empty(self) -> bool:
        return not self.text.strip()


def bundle_to_record(bundle: ProposalBundle) -> dict[str, Any]:
    """Plain-dict form of a bundle for line-delimited record streams."""
    record: dict[str, Any] = {
        "proposal_id": bundle.proposal_id,
        "sections": [
            {
                "kind": s.kind.value,
                "heading": s.heading,
                "body": s.body,
                "ordinal": s.ordinal,
            }
            for s in bundle.sections
        ],
        "opportunity": {
            "call_id": bundle.opportunity.call_id,
            "aims": bundle.opportunity.aims,
            "looking_for": bundle.opportunity.looking_for,
            "guidelines": bundle.opportunity.guidelines,
        },
        "gantt": None,
        "budget": None,
        "provenance": dict(sorted(bundle.provenance.items())),
    }
    if bundle.gantt is not None:
        record["gantt"] = {
            "label_header": bundle.gantt.label_header,
            "periods": list(bundle.gantt.periods),
            "tasks": [
                {"label": label, "cells": list(cells)}
                for label, cells in bundle.gantt.tasks
            ],
        }
    if bundle.budget is not None:
        record["budget"] = {
            f: getattr(bundle.budget, f)
            for f in (
                "full_funding", "org_contribution", "applied",
                "da_staff", "da_estates", "da_other", "fte_percent",
                "di_staff", "di_equipment", "di_travel", "di_other",
            )
        }
    return record


def bundle_from_record(record: dict[str, Any]) -> ProposalBundle:
    gantt = None
    if record.get("gantt"):
        g = record["gantt"]
        gantt = GanttTable(
            tasks=tuple(
                (t["label"], tuple(bool(c) for c in t["cells"])) for t in g["tasks"]
            ),
            periods=tuple(g["periods"]),
            label_header=g.get("label_header", "Task"),
        )
    budget = None
    if record.get("budget"):
        budget = BudgetTable(**record["budget"])
    opp = record["opportunity"]
    return ProposalBundle(
        proposal_id=record["proposal_id"],
        sections=tuple(
            Section(
                kind=SectionKind(s["kind"]),
                heading=s["heading"],
                body=s["body"],
                ordinal=s["ordinal"],
            )
            for s in record["sections"]
        ),
        opportunity=Opportunity(
            call_id=opp["call_id"],
            aims=opp["aims"],
            looking_for=opp["looking_for"],
            guidelines=opp["guidelines"],
        ),
        gantt=gantt,
        budget=budget,
        provenance=dict(record.get("provenance", {})),
    )
