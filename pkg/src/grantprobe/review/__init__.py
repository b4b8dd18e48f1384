from .ranking import aggregate_rankings, parse_final_ranking
from .records import (
    CouncilTrace,
    GroupReview,
    LedgerTotals,
    MetaReview,
    PersonaReview,
    ReviewRecord,
    ReviewSystem,
    record_from_dict,
    record_to_dict,
)
from .systems import PERSONA_ORDER, run_baseline, run_council, run_review, run_section_level

__all__ = [
    "CouncilTrace",
    "GroupReview",
    "LedgerTotals",
    "MetaReview",
    "PERSONA_ORDER",
    "PersonaReview",
    "ReviewRecord",
    "ReviewSystem",
    "aggregate_rankings",
    "parse_final_ranking",
    "record_from_dict",
    "record_to_dict",
    "run_baseline",
    "run_council",
    "run_review",
    "run_section_level",
]
