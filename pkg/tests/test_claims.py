from __future__ import annotations

import random
from collections import Counter

import pytest

from grantprobe.claims import (
    Claim,
    Relation,
    TaxonomyCategory,
    Valence,
    bidirectional_match,
    classify_category,
    cluster_claims,
    decompose_review,
    exclusivity_report,
    label_relation,
    load_taxonomy,
    name_aspect,
    relation_by_valence,
    remerge,
)
from grantprobe.errors import EmptyClaims


def _claim(i, text, valence=Valence.NEUTRAL, source="baseline", sentence=None,
           aspect=None, category=None):
    return Claim(
        claim_id=f"c{i:03d}",
        source=source,
        proposal_id="demo-001",
        source_sentence=sentence or text,
        text=text,
        valence=valence,
        aspect=aspect,
        category=category,
    )


class TestTaxonomy:
    def test_seven_axes(self):
        taxonomy = load_taxonomy()
        assert len(taxonomy) == 7
        assert {t["axis"] for t in taxonomy} == {c.value for c in TaxonomyCategory}

    def test_known_aspects_present(self):
        from grantprobe.claims import aspects_for

        assert "travel_justification" in aspects_for(TaxonomyCategory.FUNDING)
        assert "data_management" in aspects_for(TaxonomyCategory.ETHICS)
        assert "milestone_achievability" in aspects_for(TaxonomyCategory.TIMELINE)


class TestDecompose:
    def test_single_aspect_pass_through(self, gateway, reviewer_endpoint):
        claims = decompose_review(
            "The budget is well justified.", gateway, reviewer_endpoint,
            source="baseline", proposal_id="demo-001",
        )
        assert len(claims) == 1
        assert claims[0].valence is Valence.POSITIVE

    def test_contrastive_sentence_splits(self, gateway, reviewer_endpoint):
        claims = decompose_review(
            "The method is strong but infeasible at this scale and not justified.",
            gateway, reviewer_endpoint, source="baseline", proposal_id="demo-001",
        )
        assert len(claims) == 2
        assert {c.valence for c in claims} == {Valence.POSITIVE, Valence.NEGATIVE}
        assert all(
            c.source_sentence.startswith("The method is strong but") for c in claims
        )

    def test_empty_review_rejected(self, gateway, reviewer_endpoint):
        with pytest.raises(EmptyClaims):
            decompose_review("  ", gateway, reviewer_endpoint, source="x", proposal_id="p")


class TestClassify:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("Travel costs are not justified", TaxonomyCategory.FUNDING),
            ("Data management plan is missing", TaxonomyCategory.ETHICS),
            ("Milestones are unrealistic for 18 months", TaxonomyCategory.TIMELINE),
        ],
    )
    def test_taxonomy_fixtures(self, gateway, reviewer_endpoint, text, expected):
        claim = _claim(0, text)
        assert classify_category(claim, gateway, reviewer_endpoint) is expected


class TestCluster:
    def test_identical_texts_share_cluster(self, gateway, embedder_endpoint):
        claims = [
            _claim(0, "The travel budget is too high."),
            _claim(1, "The travel budget is too high."),
            _claim(2, "Ethics review cadence is unclear entirely."),
        ]
        assignment = cluster_claims(claims, gateway, embedder_endpoint, 0.8)
        assert assignment["c000"] == assignment["c001"]
        assert assignment["c002"] != assignment["c000"]

    def test_singleton_cluster(self, gateway, embedder_endpoint):
        claims = [_claim(0, "Only one claim here.")]
        assignment = cluster_claims(claims, gateway, embedder_endpoint, 0.8)
        assert len(set(assignment.values())) == 1

    def test_permutation_invariance(self, gateway, embedder_endpoint):
        texts = [
            "The travel budget is excessive for the plan.",
            "Travel costs in the budget are excessive.",
            "The milestone plan is tight.",
            "Data retention is not addressed.",
            "The evaluation plan is thorough and sound.",
        ]
        claims = [_claim(i, t) for i, t in enumerate(texts)]
        base = cluster_claims(claims, gateway, embedder_endpoint, 0.6)
        for seed in range(5):
            shuffled = claims[:]
            random.Random(seed).shuffle(shuffled)
            again = cluster_claims(shuffled, gateway, embedder_endpoint, 0.6)
            assert again == base


class TestAspect:
    def test_three_word_cap(self, gateway, reviewer_endpoint):
        aspect = name_aspect(
            [_claim(0, "Travel cost justification is weak in the budget.")],
            gateway, reviewer_endpoint,
        )
        assert 1 <= len(aspect.split()) <= 3

    def test_overlong_model_output_truncated(self, reviewer_endpoint):
        from grantprobe.modelgw import Gateway, MockTransport

        gw = Gateway(
            MockTransport(scripted=["far too many words here", "still too many words given"]),
            retry_cap=2, backoff_base_ms=0,
        )
        aspect = name_aspect([_claim(0, "anything")], gw, reviewer_endpoint)
        assert len(aspect.split()) == 3


class TestRemerge:
    def test_fragments_remerge(self):
        sentence = "The method is novel but infeasible at this scale."
        a = _claim(0, "The method is novel.", Valence.NEGATIVE, sentence=sentence, aspect="method feasibility")
        b = _claim(1, "The method is infeasible at this scale.", Valence.NEGATIVE, sentence=sentence, aspect="method feasibility")
        merged = remerge([a, b])
        assert len(merged) == 1
        assert merged[0].text == sentence

    def test_opposite_valences_kept(self):
        sentence = "The method is novel but infeasible."
        a = _claim(0, "The method is novel.", Valence.POSITIVE, sentence=sentence, aspect="novelty")
        b = _claim(1, "The method is infeasible.", Valence.NEGATIVE, sentence=sentence, aspect="novelty")
        assert len(remerge([a, b])) == 2

    def test_disjoint_sentences_unchanged(self):
        a = _claim(0, "First thing.", aspect="one two")
        b = _claim(1, "Second thing.", aspect="one two")
        assert sorted(c.text for c in remerge([a, b])) == ["First thing.", "Second thing."]

    def test_conservation_of_sentence_valence_multiset(self):
        sentence = "Compound sentence with two aspects."
        claims = [
            _claim(0, "Fragment one.", Valence.NEGATIVE, sentence=sentence, aspect="shared aspect"),
            _claim(1, "Fragment two.", Valence.NEGATIVE, sentence=sentence, aspect="shared aspect"),
            _claim(2, "Elsewhere.", Valence.POSITIVE, sentence="Elsewhere.", aspect="other"),
        ]
        before = {(c.source_sentence, c.valence) for c in claims}
        after = Counter((c.source_sentence, c.valence) for c in remerge(claims))
        assert set(after) == before
        assert all(count == 1 for count in after.values())


class TestMatching:
    def test_identical_sets_match_at_one(self, gateway, embedder_endpoint):
        a = [_claim(0, "The travel budget is too high.", source="baseline")]
        b = [_claim(1, "The travel budget is too high.", source="human")]
        records = bidirectional_match(a, b, gateway, embedder_endpoint, 0.5)
        assert all(not r.exclusive for r in records)
        assert records[0].candidates[0][1] == pytest.approx(1.0)

    def test_threshold_above_one_leaves_all_exclusive(self, gateway, embedder_endpoint):
        a = [_claim(0, "Alpha.", source="baseline")]
        b = [_claim(1, "Alpha.", source="human")]
        records = bidirectional_match(a, b, gateway, embedder_endpoint, 1.01)
        assert all(r.exclusive for r in records)

    def test_threshold_monotonicity(self, gateway, embedder_endpoint):
        a = [
            _claim(0, "The travel budget is too high for the project."),
            _claim(1, "Evaluation criteria are unclear in the call."),
        ]
        b = [
            _claim(2, "Travel budget seems too high overall.", source="human"),
            _claim(3, "The consortium is strong.", source="human"),
        ]
        matched_counts = []
        for threshold in (0.2, 0.5, 0.8, 1.01):
            records = bidirectional_match(a, b, gateway, embedder_endpoint, threshold)
            matched_counts.append(sum(1 for r in records if not r.exclusive))
        assert matched_counts == sorted(matched_counts, reverse=True)


class TestRelations:
    def test_same_valence_exact(self, gateway, reviewer_endpoint):
        a = _claim(0, "The budget is not justified.", Valence.NEGATIVE)
        b = _claim(1, "Budget justification is missing.", Valence.NEGATIVE)
        assert label_relation(a, [b], gateway, reviewer_endpoint) is Relation.EXACT

    def test_opposing_valence_contradiction(self, gateway, reviewer_endpoint):
        a = _claim(0, "The budget is well justified.", Valence.POSITIVE)
        b = _claim(1, "The budget is not justified.", Valence.NEGATIVE)
        assert label_relation(a, [b], gateway, reviewer_endpoint) is Relation.CONTRADICTION

    def test_contradiction_symmetric_under_swap(self):
        a = _claim(0, "x", Valence.POSITIVE)
        b = _claim(1, "y", Valence.NEGATIVE)
        assert relation_by_valence(a, b) is Relation.CONTRADICTION
        assert relation_by_valence(b, a) is Relation.CONTRADICTION

    def test_neutral_pairings_different(self):
        a = _claim(0, "x", Valence.NEUTRAL)
        b = _claim(1, "y", Valence.NEGATIVE)
        assert relation_by_valence(a, b) is Relation.DIFFERENT


class TestExclusivityReport:
    def _matches(self, claims, matched_ids, relations=None):
        from grantprobe.claims import MatchRecord

        records = []
        for claim in claims:
            if claim.claim_id in matched_ids:
                records.append(
                    MatchRecord(
                        claim_id=claim.claim_id, direction="A->B",
                        candidates=(("other", 0.9),),
                        relation=(relations or {}).get(claim.claim_id),
                    )
                )
            else:
                records.append(
                    MatchRecord(claim_id=claim.claim_id, direction="A->B", candidates=())
                )
        return records

    def test_all_exclusive(self):
        claims = [_claim(i, f"t{i}", category=TaxonomyCategory.FUNDING) for i in range(10)]
        report = exclusivity_report(claims, self._matches(claims, set()))
        row = report.rows[0]
        assert row.retained_rate == 1.0
        assert row.contradiction_rate == 0.0

    def test_counts_arithmetic(self):
        claims = [_claim(i, f"t{i}", category=TaxonomyCategory.FUNDING) for i in range(10)]
        matched = {"c000", "c001", "c002"}
        relations = {
            "c000": Relation.EXACT,
            "c001": Relation.EXACT,
            "c002": Relation.CONTRADICTION,
        }
        report = exclusivity_report(claims, self._matches(claims, matched, relations), relations)
        row = report.rows[0]
        assert row.total == 10
        assert row.exclusive == 7
        assert row.retained_rate == pytest.approx(0.7)
        assert row.contradiction_rate == pytest.approx(0.1)
        # exclusive + matched = total
        assert row.exclusive + len(matched) == row.total

    def test_valence_histogram(self):
        claims = (
            [_claim(i, f"n{i}", Valence.NEGATIVE) for i in range(3)]
            + [_claim(i + 3, f"u{i}", Valence.NEUTRAL) for i in range(3)]
            + [_claim(i + 6, f"p{i}", Valence.POSITIVE) for i in range(4)]
        )
        report = exclusivity_report(claims, self._matches(claims, set()))
        hist = report.valence_histograms["baseline"]
        assert hist["negative"] == pytest.approx(0.3)
        assert hist["neutral"] == pytest.approx(0.3)
        assert hist["positive"] == pytest.approx(0.4)
