from .kinds import (
    ADMINISTRATIVE_KINDS,
    GROUP_MEMBERS,
    SectionGroup,
    SectionKind,
    make_context,
)
from .model import (
    BudgetTable,
    DiffText,
    GanttTable,
    Opportunity,
    ProposalBundle,
    Section,
)
from .parse import parse_currency, parse_opportunity, parse_proposal
from .serialize import (
    serialize_budget,
    serialize_bundle,
    serialize_gantt,
    unified_diff,
)

__all__ = [
    "ADMINISTRATIVE_KINDS",
    "GROUP_MEMBERS",
    "SectionGroup",
    "SectionKind",
    "make_context",
    "BudgetTable",
    "DiffText",
    "GanttTable",
    "Opportunity",
    "ProposalBundle",
    "Section",
    "parse_currency",
    "parse_opportunity",
    "parse_proposal",
    "serialize_budget",
    "serialize_bundle",
    "serialize_gantt",
    "unified_diff",
]
