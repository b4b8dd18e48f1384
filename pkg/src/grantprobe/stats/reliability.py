"""Inter-rater reliability: variance decomposition, ICC(2,1), agreement
coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Optional, Sequence

import numpy as np

from ..errors import (
    AllZeroVariance,
    DegenerateMatrix,
    InsufficientData,
    UnequalRaterCounts,
)


@dataclass
class ScoreMatrix:
    """Targets x runs/raters score matrix; rows must be complete."""

    values: np.ndarray
    row_labels: list = field(default_factory=list)
    col_labels: list = field(default_factory=list)
    dropped_rows: list = field(default_factory=list)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise DegenerateMatrix("score matrix must be 2-dimensional")
        if np.isnan(self.values).any():
            raise DegenerateMatrix("score matrix must be complete; filter rows first")
        if not self.row_labels:
            self.row_labels = list(range(self.values.shape[0]))
        if not self.col_labels:
            self.col_labels = list(range(self.values.shape[1]))

    @classmethod
    def from_rows(
        cls, rows: Mapping[Hashable, Mapping[Hashable, float]]
    ) -> "ScoreMatrix":
        """Build a complete matrix over the union of columns, dropping
        incomplete rows and recording which were dropped."""
        columns = sorted({c for scores in rows.values() for c in scores})
        kept, dropped, data = [], [], []
        for label in sorted(rows, key=str):
            scores = rows[label]
            if all(c in scores for c in columns):
                kept.append(label)
                data.append([float(scores[c]) for c in columns])
            else:
                dropped.append(label)
        if not data:
            raise DegenerateMatrix("no complete rows")
        return cls(
            values=np.array(data), row_labels=kept, col_labels=columns, dropped_rows=dropped
        )


@dataclass(frozen=True)
class VarianceComponents:
    sigma2_p: float  # proposals / targets
    sigma2_r: float  # raters / runs
    sigma2_e: float  # residual
    clamped: tuple[str, ...] = ()  # names of components clamped up to zero

    def __post_init__(self) -> None:
        if min(self.sigma2_p, self.sigma2_r, self.sigma2_e) < 0:
            raise ValueError("variance components must be >= 0")


def variance_components(m: ScoreMatrix) -> VarianceComponents:
    """Two-way random-effects ANOVA components from mean squares.

    sigma2_p = (MSR - MSE) / k, sigma2_r = (MSC - MSE) / n, sigma2_e = MSE,
    negative estimates clamped to zero and flagged.
    """
    x = m.values
    n, k = x.shape
    if n < 2 or k < 2:
        raise DegenerateMatrix(f"need >=2 rows and columns, got {n}x{k}")
    grand = x.mean()
    row_means = x.mean(axis=1)
    col_means = x.mean(axis=0)
    msr = k * np.sum((row_means - grand) ** 2) / (n - 1)
    msc = n * np.sum((col_means - grand) ** 2) / (k - 1)
    residual = x - row_means[:, None] - col_means[None, :] + grand
    mse = np.sum(residual**2) / ((n - 1) * (k - 1))

    clamped = []
    sigma2_p = (msr - mse) / k
    sigma2_r = (msc - mse) / n
    if sigma2_p < 0:
        sigma2_p = 0.0
        clamped.append("sigma2_p")
    if sigma2_r < 0:
        sigma2_r = 0.0
        clamped.append("sigma2_r")
    return VarianceComponents(
        sigma2_p=float(sigma2_p),
        sigma2_r=float(sigma2_r),
        sigma2_e=float(mse),
        clamped=tuple(clamped),
    )


def icc21(c: VarianceComponents) -> float:
    """ICC(2,1): share of total variance attributable to target differences."""
    total = c.sigma2_p + c.sigma2_r + c.sigma2_e
    if total == 0:
        raise AllZeroVariance("all variance components are zero")
    return c.sigma2_p / total


# -- Krippendorff's alpha ------------------------------------------------------


def _ordinal_delta(values: Sequence[float], totals: dict[float, float]):
    index = {v: i for i, v in enumerate(values)}

    def delta(a: float, b: float) -> float:
        if a == b:
            return 0.0
        lo, hi = sorted((index[a], index[b]))
        span = sum(totals[values[g]] for g in range(lo, hi + 1))
        return (span - (totals[a] + totals[b]) / 2.0) ** 2

    return delta


def krippendorff_alpha(
    ratings: Sequence[Sequence[Optional[float]]], metric: str = "nominal"
) -> float:
    """Coincidence-matrix alpha over items x raters; None marks missing.

    ``metric`` is ``nominal`` (default, for categorical verdicts) or
    ``ordinal``.
    """
    if metric not in ("nominal", "ordinal"):
        raise ValueError(f"metric must be nominal|ordinal, got {metric!r}")
    units = [[v for v in item if v is not None] for item in ratings]
    units = [u for u in units if len(u) >= 2]
    if not units:
        raise InsufficientData("need at least one item with two ratings")

    values = sorted({v for unit in units for v in unit})
    coincidence: dict[tuple[float, float], float] = {}
    totals: dict[float, float] = {v: 0.0 for v in values}
    for unit in units:
        m_u = len(unit)
        for i, a in enumerate(unit):
            for j, b in enumerate(unit):
                if i == j:
                    continue
                coincidence[(a, b)] = coincidence.get((a, b), 0.0) + 1.0 / (m_u - 1)
    for (a, _), count in coincidence.items():
        totals[a] += count
    n = sum(totals.values())
    if n <= 1:
        raise InsufficientData("fewer than two pairable values")

    if metric == "nominal":
        delta = lambda a, b: 0.0 if a == b else 1.0  # noqa: E731
    else:
        delta = _ordinal_delta(values, totals)

    d_o = sum(count * delta(a, b) for (a, b), count in coincidence.items()) / n
    d_e = sum(
        totals[a] * totals[b] * delta(a, b) for a in values for b in values
    ) / (n * (n - 1))
    if d_e == 0:
        return 1.0
    return 1.0 - d_o / d_e


# -- kappas ---------------------------------------------------------------------


def fleiss_kappa(counts: Sequence[Sequence[int]]) -> float:
    """Fleiss' kappa from an items x categories count matrix; every item
    must have the same number of ratings."""
    arr = np.asarray(counts, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise InsufficientData("counts must be a non-empty 2D matrix")
    row_sums = arr.sum(axis=1)
    if not np.all(row_sums == row_sums[0]):
        raise UnequalRaterCounts("every item must have the same rater count")
    m = row_sums[0]
    if m < 2:
        raise InsufficientData("need at least two ratings per item")
    n_items = arr.shape[0]
    p_j = arr.sum(axis=0) / (n_items * m)
    p_i = (np.sum(arr**2, axis=1) - m) / (m * (m - 1))
    p_bar = p_i.mean()
    p_e = np.sum(p_j**2)
    if p_e == 1.0:
        return 1.0 if p_bar == 1.0 else 0.0
    return float((p_bar - p_e) / (1.0 - p_e))


def cohen_kappa(pairs: Sequence[tuple[Hashable, Hashable]]) -> float:
    """Two-rater kappa over (label_a, label_b) pairs."""
    if not pairs:
        raise InsufficientData("need at least one pair")
    n = len(pairs)
    po = sum(1 for a, b in pairs if a == b) / n
    labels = sorted({a for a, _ in pairs} | {b for _, b in pairs}, key=str)
    pa = {lab: sum(1 for a, _ in pairs if a == lab) / n for lab in labels}
    pb = {lab: sum(1 for _, b in pairs if b == lab) / n for lab in labels}
    pe = sum(pa[lab] * pb[lab] for lab in labels)
    if pe == 1.0:
        return 1.0 if po == 1.0 else 0.0
    return (po - pe) / (1.0 - pe)


def percent_agreement(labels: Sequence[Sequence[Hashable]]) -> float:
    """Mean pairwise agreement fraction over items x raters."""
    agreements = []
    for item in labels:
        raters = len(item)
        if raters < 2:
            raise InsufficientData("need at least two raters per item")
        pairs = agree = 0
        for i in range(raters):
            for j in range(i + 1, raters):
                pairs += 1
                agree += item[i] == item[j]
        agreements.append(agree / pairs)
    if not agreements:
        raise InsufficientData("no items")
    return float(np.mean(agreements))
