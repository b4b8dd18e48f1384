from .comparison import (
    DegradationRecord,
    kruskal_wallis,
    score_degradation,
    spearman,
)
from .reliability import (
    ScoreMatrix,
    VarianceComponents,
    cohen_kappa,
    fleiss_kappa,
    icc21,
    krippendorff_alpha,
    percent_agreement,
    variance_components,
)

__all__ = [
    "DegradationRecord",
    "ScoreMatrix",
    "VarianceComponents",
    "cohen_kappa",
    "fleiss_kappa",
    "icc21",
    "krippendorff_alpha",
    "kruskal_wallis",
    "percent_agreement",
    "score_degradation",
    "spearman",
    "variance_components",
]
