from __future__ import annotations

import numpy as np
import pytest

from grantprobe.errors import (
    AllZeroVariance,
    DegenerateMatrix,
    InsufficientData,
    LengthMismatch,
    MismatchedPair,
    TooFewGroups,
    UnequalRaterCounts,
)
from grantprobe.review import LedgerTotals, ReviewRecord, ReviewSystem
from grantprobe.stats import (
    ScoreMatrix,
    VarianceComponents,
    cohen_kappa,
    fleiss_kappa,
    icc21,
    krippendorff_alpha,
    kruskal_wallis,
    percent_agreement,
    score_degradation,
    spearman,
    variance_components,
)


class TestVarianceComponents:
    def test_identical_columns_zero_rater_and_residual(self):
        m = ScoreMatrix(np.array([[1.0, 1.0], [4.0, 4.0], [6.0, 6.0]]))
        c = variance_components(m)
        assert c.sigma2_r == pytest.approx(0.0, abs=1e-12)
        assert c.sigma2_e == pytest.approx(0.0, abs=1e-12)
        assert c.sigma2_p > 0

    def test_constant_matrix_all_zero(self):
        c = variance_components(ScoreMatrix(np.full((3, 3), 4.0)))
        assert (c.sigma2_p, c.sigma2_r, c.sigma2_e) == (0.0, 0.0, 0.0)

    def test_degenerate_shapes(self):
        with pytest.raises(DegenerateMatrix):
            variance_components(ScoreMatrix(np.array([[1.0, 2.0]])))
        with pytest.raises(DegenerateMatrix):
            variance_components(ScoreMatrix(np.array([[1.0], [2.0]])))

    def test_from_rows_drops_incomplete(self):
        m = ScoreMatrix.from_rows(
            {"a": {0: 1.0, 1: 2.0}, "b": {0: 3.0}, "c": {0: 4.0, 1: 5.0}}
        )
        assert m.values.shape == (2, 2)
        assert m.dropped_rows == ["b"]

    def test_negative_estimates_clamped_and_flagged(self):
        # columns anti-correlated across rows drives row variance below MSE
        m = ScoreMatrix(np.array([[1.0, 6.0], [6.0, 1.0], [1.0, 6.0], [6.0, 1.0]]))
        c = variance_components(m)
        assert c.sigma2_p == 0.0
        assert "sigma2_p" in c.clamped


class TestIcc:
    def test_table_component_fixtures(self):
        # between/within pairs with the within split across runs and residual
        for between, within, expected in ((0.13, 0.80, 0.14), (0.11, 0.88, 0.11), (0.49, 0.49, 0.50)):
            c = VarianceComponents(sigma2_p=between, sigma2_r=within / 2, sigma2_e=within / 2)
            assert icc21(c) == pytest.approx(expected, abs=0.005)

    def test_perfect_reliability(self):
        assert icc21(VarianceComponents(2.5, 0.0, 0.0)) == 1.0

    def test_all_zero_raises(self):
        with pytest.raises(AllZeroVariance):
            icc21(VarianceComponents(0.0, 0.0, 0.0))

    def test_monotone_in_target_variance(self):
        values = [
            icc21(VarianceComponents(p, 0.3, 0.2)) for p in (0.1, 0.5, 1.0, 2.0, 5.0)
        ]
        assert values == sorted(values)
        assert all(0.0 <= v <= 1.0 for v in values)


class TestKrippendorff:
    def test_perfect_agreement(self):
        ratings = [["a", "a", "a"], ["b", "b", "b"], ["a", "a", "a"]]
        assert krippendorff_alpha(ratings) == pytest.approx(1.0)

    def test_missing_values_allowed(self):
        ratings = [["a", "a", None], ["b", None, "b"], ["a", "a", "a"]]
        assert krippendorff_alpha(ratings) == pytest.approx(1.0)

    def test_independent_uniform_near_zero(self):
        import random

        rng = random.Random(7)
        ratings = [[rng.choice("abc") for _ in range(4)] for _ in range(600)]
        assert abs(krippendorff_alpha(ratings)) < 0.05

    def test_insufficient_data(self):
        with pytest.raises(InsufficientData):
            krippendorff_alpha([["a"], ["b"]])

    def test_ordinal_metric_supported(self):
        ratings = [[1, 2], [2, 2], [3, 3], [1, 1]]
        nominal = krippendorff_alpha(ratings, "nominal")
        ordinal = krippendorff_alpha(ratings, "ordinal")
        assert -1.0 <= nominal <= 1.0 and -1.0 <= ordinal <= 1.0
        assert nominal != ordinal  # near misses score differently


class TestFleiss:
    def test_unanimous(self):
        counts = [[3, 0], [0, 3], [3, 0], [0, 3]]
        assert fleiss_kappa(counts) == pytest.approx(1.0)

    def test_uniform_random_near_zero(self):
        import random

        rng = random.Random(3)
        counts = []
        for _ in range(800):
            labels = [rng.randrange(3) for _ in range(4)]
            counts.append([labels.count(c) for c in range(3)])
        assert abs(fleiss_kappa(counts)) < 0.05

    def test_unequal_rater_counts(self):
        with pytest.raises(UnequalRaterCounts):
            fleiss_kappa([[2, 1], [1, 1]])


class TestCohen:
    def test_identical_lists(self):
        pairs = [("x", "x"), ("y", "y"), ("x", "x"), ("z", "z")]
        assert cohen_kappa(pairs) == pytest.approx(1.0)

    def test_orthogonal_binary(self):
        pairs = [("a", "b"), ("b", "a")] * 5
        assert cohen_kappa(pairs) <= 0.0

    def test_empty_rejected(self):
        with pytest.raises(InsufficientData):
            cohen_kappa([])


class TestPercentAgreement:
    def test_unanimous(self):
        assert percent_agreement([["a", "a", "a"]] * 4) == 1.0

    def test_one_in_ten_disagreement(self):
        items = [["a", "a"]] * 9 + [["a", "b"]]
        assert percent_agreement(items) == pytest.approx(0.9)

    def test_three_raters_pairwise_mean(self):
        items = [["a", "a", "b"]]  # 1 of 3 pairs agree
        assert percent_agreement(items) == pytest.approx(1 / 3)


class TestKruskal:
    def test_identical_groups_h_zero(self):
        h, p = kruskal_wallis([[1, 2, 3], [1, 2, 3]])
        assert h == pytest.approx(0.0, abs=1e-12)

    def test_separated_groups(self):
        h, p = kruskal_wallis([[1, 2, 3], [7, 8, 9]])
        assert h > 0 and p < 0.1

    def test_too_few_groups(self):
        with pytest.raises(TooFewGroups):
            kruskal_wallis([[1, 2, 3]])
        with pytest.raises(TooFewGroups):
            kruskal_wallis([[1, 2], []])

    def test_all_tied_values(self):
        h, p = kruskal_wallis([[2, 2], [2, 2, 2]])
        assert (h, p) == (0.0, 1.0)

    def test_monotone_transform_invariance(self):
        import random

        rng = random.Random(11)
        groups = [[rng.uniform(0, 10) for _ in range(6)] for _ in range(3)]
        h1, _ = kruskal_wallis(groups)
        h2, _ = kruskal_wallis([[x**3 + 2 for x in g] for g in groups])
        assert h1 == pytest.approx(h2, abs=1e-9)


class TestSpearman:
    def test_strictly_increasing(self):
        rho, p = spearman([1, 2, 3, 4], [10, 20, 30, 40])
        assert rho == 1.0 and p == 0.0

    def test_reversed(self):
        rho, p = spearman([1, 2, 3, 4], [9, 7, 5, 3])
        assert rho == -1.0

    def test_symmetry(self):
        x, y = [1.0, 4.0, 2.0, 2.0, 5.0], [2.0, 1.0, 3.0, 3.0, 4.0]
        assert spearman(x, y)[0] == pytest.approx(spearman(y, x)[0], abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            spearman([1, 2, 3], [1, 2])

    def test_rho_bounded(self):
        import random

        rng = random.Random(2)
        for _ in range(20):
            x = [rng.uniform(0, 1) for _ in range(8)]
            y = [rng.uniform(0, 1) for _ in range(8)]
            rho, p = spearman(x, y)
            assert -1.0 <= rho <= 1.0
            assert 0.0 <= p <= 1.0


def _record(system, target, score, run_index=0, effort="high"):
    return ReviewRecord(
        system=system, target=target, run_index=run_index, effort=effort,
        score=score, explanation="e", ledger=LedgerTotals(),
    )


class TestScoreDegradation:
    def test_positive_delta(self):
        rec = score_degradation(
            _record(ReviewSystem.BASELINE, "p1", 5),
            _record(ReviewSystem.BASELINE, "p1::clarity.x", 3),
        )
        assert rec.delta_s == 2.0 and not rec.anomalous

    def test_zero_delta(self):
        rec = score_degradation(
            _record(ReviewSystem.BASELINE, "p1", 4),
            _record(ReviewSystem.BASELINE, "p1::f", 4),
        )
        assert rec.delta_s == 0.0 and not rec.anomalous

    def test_negative_delta_flagged(self):
        rec = score_degradation(
            _record(ReviewSystem.BASELINE, "p1", 3),
            _record(ReviewSystem.BASELINE, "p1::f", 5),
        )
        assert rec.delta_s == -2.0 and rec.anomalous

    def test_mismatched_pairs_rejected(self):
        with pytest.raises(MismatchedPair):
            score_degradation(
                _record(ReviewSystem.BASELINE, "p1", 3),
                _record(ReviewSystem.BASELINE, "p2::f", 5),  # different lineage
            )
        section_record = ReviewRecord(
            system=ReviewSystem.SECTION_LEVEL, target="p1::f", run_index=0,
            effort="high", score=5, explanation="e", group_reviews=(),
        )
        with pytest.raises(MismatchedPair):
            score_degradation(_record(ReviewSystem.BASELINE, "p1", 3), section_record)
        with pytest.raises(MismatchedPair):
            score_degradation(
                _record(ReviewSystem.BASELINE, "p1", 3),
                _record(ReviewSystem.BASELINE, "p1::f", 5, effort="low"),
            )
