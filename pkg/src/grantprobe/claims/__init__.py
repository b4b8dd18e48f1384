from .model import (
    Claim,
    ExclusivityReport,
    ExclusivityRow,
    MatchRecord,
    Relation,
    TaxonomyCategory,
    Valence,
    claim_from_dict,
    claim_to_dict,
)
from .pipeline import (
    bidirectional_match,
    classify_category,
    cluster_claims,
    decompose_review,
    exclusivity_report,
    label_relation,
    name_aspect,
    relation_by_valence,
    remerge,
)
from .taxonomy import aspects_for, load_taxonomy, taxonomy_vocabulary

__all__ = [
    "Claim",
    "ExclusivityReport",
    "ExclusivityRow",
    "MatchRecord",
    "Relation",
    "TaxonomyCategory",
    "Valence",
    "aspects_for",
    "bidirectional_match",
    "claim_from_dict",
    "claim_to_dict",
    "classify_category",
    "cluster_claims",
    "decompose_review",
    "exclusivity_report",
    "label_relation",
    "load_taxonomy",
    "name_aspect",
    "relation_by_valence",
    "remerge",
]
