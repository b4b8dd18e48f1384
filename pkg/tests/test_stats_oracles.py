"""Every statistic must match an independent brute-force oracle on
randomized small instances (<=12 items) to 1e-9.

The oracles deliberately take different computational routes from the
implementations: raw-total ANOVA sums of squares, pairwise within-unit
disagreement for alpha, ordered-pair counting for the kappas, and the
general rank-variance form of H.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter

import numpy as np
import pytest

from grantprobe.stats import (
    ScoreMatrix,
    cohen_kappa,
    fleiss_kappa,
    krippendorff_alpha,
    kruskal_wallis,
    percent_agreement,
    spearman,
    variance_components,
)

N_INSTANCES = 100
TOL = 1e-9


# -- oracles -------------------------------------------------------------------


def oracle_variance_components(x: np.ndarray):
    """Classical computational-formula ANOVA from raw totals."""
    n, k = x.shape
    grand_total = x.sum()
    correction = grand_total**2 / (n * k)
    sst = (x**2).sum() - correction
    ssr = sum(x[i, :].sum() ** 2 for i in range(n)) / k - correction
    ssc = sum(x[:, j].sum() ** 2 for j in range(k)) / n - correction
    sse = sst - ssr - ssc
    msr = ssr / (n - 1)
    msc = ssc / (k - 1)
    mse = sse / ((n - 1) * (k - 1))
    return (max((msr - mse) / k, 0.0), max((msc - mse) / n, 0.0), mse)


def oracle_krippendorff(ratings, metric):
    units = [[v for v in item if v is not None] for item in ratings]
    units = [u for u in units if len(u) >= 2]
    pooled = [v for u in units for v in u]
    n = len(pooled)
    freq = Counter(pooled)
    values = sorted(freq)

    def delta(a, b):
        if a == b:
            return 0.0
        if metric == "nominal":
            return 1.0
        ia, ib = sorted((values.index(a), values.index(b)))
        span = sum(freq[values[g]] for g in range(ia, ib + 1))
        return (span - (freq[a] + freq[b]) / 2.0) ** 2

    d_o = 0.0
    for unit in units:
        m_u = len(unit)
        within = sum(
            delta(unit[i], unit[j])
            for i in range(m_u)
            for j in range(m_u)
            if i != j
        )
        d_o += within / (m_u - 1)
    d_o /= n

    d_e = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                d_e += delta(pooled[i], pooled[j])
    d_e /= n * (n - 1)
    if d_e == 0:
        return 1.0
    return 1.0 - d_o / d_e


def oracle_fleiss(label_rows):
    """From raw per-item label lists via ordered-pair agreement counting."""
    m = len(label_rows[0])
    categories = sorted({lab for row in label_rows for lab in row})
    agreements = []
    for row in label_rows:
        counts = Counter(row)
        agree_pairs = sum(c * (c - 1) for c in counts.values())
        agreements.append(agree_pairs / (m * (m - 1)))
    p_bar = sum(agreements) / len(agreements)
    totals = Counter(lab for row in label_rows for lab in row)
    total_ratings = len(label_rows) * m
    p_e = sum((totals[c] / total_ratings) ** 2 for c in categories)
    if p_e == 1.0:
        return 1.0 if p_bar == 1.0 else 0.0
    return (p_bar - p_e) / (1 - p_e)


def oracle_cohen(pairs):
    n = len(pairs)
    confusion = Counter(pairs)
    po = sum(count for (a, b), count in confusion.items() if a == b) / n
    labels = sorted({a for a, _ in pairs} | {b for _, b in pairs}, key=str)
    pe = 0.0
    for lab in labels:
        row = sum(count for (a, _), count in confusion.items() if a == lab)
        col = sum(count for (_, b), count in confusion.items() if b == lab)
        pe += (row / n) * (col / n)
    if pe == 1.0:
        return 1.0 if po == 1.0 else 0.0
    return (po - pe) / (1 - pe)


def oracle_ranks(values):
    """Tie-averaged ranks via sort + groupby (independent of the argsort
    implementation)."""
    indexed = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    pos = 0
    for _, group in itertools.groupby(indexed, key=lambda i: values[i]):
        group = list(group)
        avg = (2 * pos + len(group) + 1) / 2.0
        for i in group:
            ranks[i] = avg
        pos += len(group)
    return ranks


def oracle_kruskal(groups):
    """General form: H = (N-1) * SSB_ranks / SST_ranks (tie-robust)."""
    pooled = [v for g in groups for v in g]
    n = len(pooled)
    ranks = oracle_ranks(pooled)
    mean_rank = sum(ranks) / n
    sst = sum((r - mean_rank) ** 2 for r in ranks)
    if sst == 0:
        return 0.0
    ssb = 0.0
    offset = 0
    for g in groups:
        rs = ranks[offset : offset + len(g)]
        group_mean = sum(rs) / len(rs)
        ssb += len(g) * (group_mean - mean_rank) ** 2
        offset += len(g)
    return (n - 1) * ssb / sst


def oracle_spearman(x, y):
    rx, ry = oracle_ranks(x), oracle_ranks(y)
    n = len(x)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / (vx**0.5 * vy**0.5)


def oracle_percent_agreement(items):
    fractions = []
    for item in items:
        pairs = list(itertools.combinations(item, 2))
        fractions.append(sum(a == b for a, b in pairs) / len(pairs))
    return sum(fractions) / len(fractions)


# -- randomized comparison suites ------------------------------------------------


def test_variance_components_oracle():
    rng = random.Random(101)
    for _ in range(N_INSTANCES):
        n = rng.randint(2, 12)
        k = rng.randint(2, 6)
        x = np.array([[rng.uniform(1, 6) for _ in range(k)] for _ in range(n)])
        got = variance_components(ScoreMatrix(x))
        want = oracle_variance_components(x)
        assert got.sigma2_p == pytest.approx(want[0], abs=TOL)
        assert got.sigma2_r == pytest.approx(want[1], abs=TOL)
        assert got.sigma2_e == pytest.approx(want[2], abs=TOL)


@pytest.mark.parametrize("metric", ["nominal", "ordinal"])
def test_krippendorff_oracle(metric):
    rng = random.Random(202)
    for _ in range(N_INSTANCES):
        items = rng.randint(2, 12)
        raters = rng.randint(2, 4)
        ratings = [
            [
                rng.choice([1.0, 2.0, 3.0]) if rng.random() > 0.2 else None
                for _ in range(raters)
            ]
            for _ in range(items)
        ]
        if not any(sum(v is not None for v in row) >= 2 for row in ratings):
            continue
        got = krippendorff_alpha(ratings, metric)
        want = oracle_krippendorff(ratings, metric)
        assert got == pytest.approx(want, abs=TOL)


def test_krippendorff_small_fixture_against_oracle():
    # 3 raters x 6 items, one disagreement
    ratings = [
        ["C", "C", "C"], ["P", "P", "P"], ["I", "I", "I"],
        ["C", "C", "C"], ["P", "P", "I"], ["I", "I", "I"],
    ]
    assert krippendorff_alpha(ratings) == pytest.approx(
        oracle_krippendorff(ratings, "nominal"), abs=TOL
    )


def test_fleiss_oracle():
    rng = random.Random(303)
    for _ in range(N_INSTANCES):
        items = rng.randint(2, 12)
        raters = rng.randint(2, 5)
        cats = rng.randint(2, 4)
        rows = [[rng.randrange(cats) for _ in range(raters)] for _ in range(items)]
        counts = [[row.count(c) for c in range(cats)] for row in rows]
        assert fleiss_kappa(counts) == pytest.approx(oracle_fleiss(rows), abs=TOL)


def test_fleiss_fixed_four_item_fixture():
    rows = [[0, 0, 1], [1, 1, 1], [0, 1, 2], [2, 2, 2]]
    counts = [[row.count(c) for c in range(3)] for row in rows]
    assert fleiss_kappa(counts) == pytest.approx(oracle_fleiss(rows), abs=TOL)


def test_cohen_oracle():
    rng = random.Random(404)
    for _ in range(N_INSTANCES):
        n = rng.randint(1, 12)
        labels = "abc"[: rng.randint(2, 3)]
        pairs = [(rng.choice(labels), rng.choice(labels)) for _ in range(n)]
        assert cohen_kappa(pairs) == pytest.approx(oracle_cohen(pairs), abs=TOL)


def test_kruskal_oracle():
    rng = random.Random(505)
    for _ in range(N_INSTANCES):
        n_groups = rng.randint(2, 4)
        groups = [
            [float(rng.randint(1, 6)) for _ in range(rng.randint(1, 12))]
            for _ in range(n_groups)
        ]
        if len({v for g in groups for v in g}) == 1:
            continue
        h, p = kruskal_wallis(groups)
        assert h == pytest.approx(oracle_kruskal(groups), abs=TOL)
        from scipy import stats as sps

        assert p == pytest.approx(float(sps.chi2.sf(h, len(groups) - 1)), abs=TOL)


def test_kruskal_heavy_ties_match_oracle():
    groups = [[1, 1, 2, 2], [2, 2, 3, 3], [1, 3, 3, 1]]
    h, _ = kruskal_wallis(groups)
    assert h == pytest.approx(oracle_kruskal(groups), abs=TOL)


def test_spearman_oracle():
    rng = random.Random(606)
    for _ in range(N_INSTANCES):
        n = rng.randint(3, 12)
        x = [float(rng.randint(0, 5)) for _ in range(n)]
        y = [float(rng.randint(0, 5)) for _ in range(n)]
        if len(set(x)) == 1 or len(set(y)) == 1:
            continue
        rho, _ = spearman(x, y)
        assert rho == pytest.approx(oracle_spearman(x, y), abs=TOL)


def test_spearman_tied_fixture():
    x = [1.0, 2.0, 2.0, 3.0, 4.0]
    y = [1.0, 3.0, 2.0, 2.0, 5.0]
    rho, _ = spearman(x, y)
    assert rho == pytest.approx(oracle_spearman(x, y), abs=TOL)


def test_percent_agreement_oracle():
    rng = random.Random(707)
    for _ in range(N_INSTANCES):
        items = rng.randint(1, 12)
        raters = rng.randint(2, 5)
        data = [[rng.choice("CPI") for _ in range(raters)] for _ in range(items)]
        assert percent_agreement(data) == pytest.approx(
            oracle_percent_agreement(data), abs=TOL
        )
