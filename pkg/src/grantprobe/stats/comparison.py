"""Rank tests, correlations, and score degradation."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as sps

from ..errors import LengthMismatch, MismatchedPair, TooFewGroups


def _average_ranks(values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(len(arr), dtype=float)
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0  # ranks are 1-based
        ranks[order[i : j + 1]] = avg
        i = j + 1
    return ranks


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Tie-corrected H and a chi-square upper-tail p on (g - 1) dof."""
    if len(groups) < 2 or any(len(g) == 0 for g in groups):
        raise TooFewGroups("need >=2 non-empty groups")
    pooled = [v for g in groups for v in g]
    n_total = len(pooled)
    ranks = _average_ranks(pooled)
    h = 0.0
    offset = 0
    for g in groups:
        r_sum = float(ranks[offset : offset + len(g)].sum())
        h += r_sum**2 / len(g)
        offset += len(g)
    h = 12.0 / (n_total * (n_total + 1)) * h - 3.0 * (n_total + 1)

    tie_counts = Counter(pooled).values()
    correction = 1.0 - sum(t**3 - t for t in tie_counts) / (n_total**3 - n_total)
    if correction == 0.0:
        # every observation tied: no rank information at all
        return 0.0, 1.0
    h /= correction
    h = max(h, 0.0)
    p = float(sps.chi2.sf(h, df=len(groups) - 1))
    return h, p


def spearman(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Spearman's rho over average ranks with a t-approximation p-value."""
    if len(x) != len(y):
        raise LengthMismatch(f"lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise LengthMismatch("need at least 3 observations")
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    sx = rx.std()
    sy = ry.std()
    if sx == 0 or sy == 0:
        return 0.0, 1.0
    rho = float(np.mean((rx - rx.mean()) * (ry - ry.mean())) / (sx * sy))
    rho = max(-1.0, min(1.0, rho))
    if abs(abs(rho) - 1.0) < 1e-12:  # identical rank orders up to float noise
        rho = 1.0 if rho > 0 else -1.0
    if abs(rho) == 1.0:
        return rho, 0.0
    t = rho * np.sqrt((n - 2) / (1.0 - rho**2))
    p = float(2.0 * sps.t.sf(abs(t), df=n - 2))
    return rho, p


@dataclass(frozen=True)
class DegradationRecord:
    original_target: str
    perturbed_target: str
    system: str
    delta_s: float  # original score - perturbed score
    anomalous: bool  # perturbation increased the score

    def __post_init__(self) -> None:
        if abs(self.delta_s) > 5:
            raise ValueError("|delta| cannot exceed 5 on the 1-6 scale")


def score_degradation(original, perturbed) -> DegradationRecord:
    """Signed score difference for a matched (original, perturbed) pair.

    Positive deltas mean the system appropriately lowered the score;
    negative deltas are flagged anomalous.
    """
    if original.system != perturbed.system:
        raise MismatchedPair("records come from different review systems")
    if original.effort != perturbed.effort:
        raise MismatchedPair("records come from different effort levels")
    base = perturbed.target.split("::", 1)[0]
    if original.target != base:
        raise MismatchedPair(
            f"{perturbed.target} does not derive from {original.target}"
        )
    delta = float(original.score - perturbed.score)
    return DegradationRecord(
        original_target=original.target,
        perturbed_target=perturbed.target,
        system=original.system.value,
        delta_s=delta,
        anomalous=delta < 0,
    )
