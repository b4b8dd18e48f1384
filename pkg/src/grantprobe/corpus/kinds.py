"""Section kinds and the four review groups built from them."""
from __future__ import annotations

import enum
from typing import TYPE_CHECKING

from ..errors import EmptyGroup

if TYPE_CHECKING:
    from .model import ProposalBundle, Section


class SectionKind(str, enum.Enum):
    SUMMARY = "summary"
    VISION_AND_APPROACH = "vision_and_approach"
    TEAM_CAPABILITY = "team_capability"
    CORE_TEAM = "core_team"
    PROJECT_PARTNERS = "project_partners"
    FACILITIES = "facilities"
    RESOURCES_AND_COSTS = "resources_and_costs"
    ETHICS_RRI = "ethics_rri"
    HUMAN_PARTICIPANTS = "human_participants"
    REFERENCES = "references"
    THEMATIC_ALIGNMENT = "thematic_alignment"
    LETTERS_OF_SUPPORT = "letters_of_support"
    # Unknown headings are preserved under OTHER; the section keeps its
    # original heading text, so no information is lost.
    OTHER = "other"


#: Purely administrative kinds; never included in any review group.
ADMINISTRATIVE_KINDS = frozenset(
    {SectionKind.THEMATIC_ALIGNMENT, SectionKind.LETTERS_OF_SUPPORT}
)


class SectionGroup(str, enum.Enum):
    VISION_APPROACH = "vision_approach"
    TEAM_CAPABILITY = "team_capability"
    FUNDING_RESOURCES = "funding_resources"
    ETHICS = "ethics"


#: Fixed group membership, in group-definition order.
GROUP_MEMBERS: dict[SectionGroup, tuple[SectionKind, ...]] = {
    SectionGroup.VISION_APPROACH: (
        SectionKind.VISION_AND_APPROACH,
        SectionKind.REFERENCES,
    ),
    SectionGroup.TEAM_CAPABILITY: (
        SectionKind.SUMMARY,
        SectionKind.TEAM_CAPABILITY,
        SectionKind.CORE_TEAM,
        SectionKind.PROJECT_PARTNERS,
        SectionKind.FACILITIES,
        SectionKind.REFERENCES,
    ),
    SectionGroup.FUNDING_RESOURCES: (
        SectionKind.SUMMARY,
        SectionKind.RESOURCES_AND_COSTS,
        SectionKind.CORE_TEAM,
        SectionKind.FACILITIES,
        SectionKind.REFERENCES,
    ),
    SectionGroup.ETHICS: (
        SectionKind.SUMMARY,
        SectionKind.ETHICS_RRI,
        SectionKind.HUMAN_PARTICIPANTS,
    ),
}


def make_context(bundle: "ProposalBundle", group: SectionGroup) -> list["Section"]:
    """Return the bundle sections belonging to ``group``.

    Sections come back in group-definition order; member kinds absent from
    the bundle are skipped silently.  Raises :class:`EmptyGroup` when no
    member section is present at all, which marks the group unreviewable.
    """
    by_kind: dict[SectionKind, list["Section"]] = {}
    for section in bundle.sections:
        by_kind.setdefault(section.kind, []).append(section)

    context: list["Section"] = []
    for kind in GROUP_MEMBERS[group]:
        for section in sorted(by_kind.get(kind, []), key=lambda s: s.ordinal):
            context.append(section)
    if not context:
        raise EmptyGroup(f"no sections present for group {group.value}")
    return context
