from __future__ import annotations

import json
from pathlib import Path

import pytest

from grantprobe.data import copy_demo_corpus
from grantprobe.harness.cli import main
from grantprobe.harness.records import read_stream


def _run_pipeline(tmp_path: Path, run_name: str) -> Path:
    corpus = copy_demo_corpus(tmp_path / f"corpus-{run_name}")
    run = tmp_path / run_name
    steps = [
        ["ingest", "--corpus", str(corpus), "--run", str(run)],
        ["perturb", "--run", str(run), "--per-axis", "1"],
        ["review", "--run", str(run), "--system", "all", "--repeats", "2"],
        ["judge", "--run", str(run)],
        ["claims", "--run", str(run)],
        ["stats", "--run", str(run)],
        ["report", "--run", str(run)],
    ]
    for argv in steps:
        assert main(argv) == 0, f"stage failed: {argv}"
    return run


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("e2e")
    return tmp_path, _run_pipeline(tmp_path, "run-a")


class TestPipelineOutputs:
    def test_streams_exist_and_are_schema_stamped(self, pipeline):
        _, run = pipeline
        for stage in ("bundles", "variants", "reviews", "verdicts", "claims", "stats"):
            files = list(run.glob(f"{stage}-v*.jsonl"))
            assert files, f"missing stream {stage}"
            for record in read_stream(files[0]):
                assert record["schema"].startswith(f"grantprobe/{stage}@")

    def test_variant_counts(self, pipeline):
        _, run = pipeline
        variants = list(read_stream(next(run.glob("variants-v*.jsonl"))))
        assert len(variants) == 6  # one spec per axis
        assert all(v["applicability"] == "applied" for v in variants)

    def test_review_counts(self, pipeline):
        _, run = pipeline
        reviews = list(read_stream(next(run.glob("reviews-v*.jsonl"))))
        # (1 original + 6 variants) x 3 systems x 2 repeats
        assert len(reviews) == 7 * 3 * 2
        assert {r["system"] for r in reviews} == {"baseline", "section_level", "council"}
        assert all(1 <= r["score"] <= 6 for r in reviews)

    def test_verdict_counts_and_values(self, pipeline):
        _, run = pipeline
        verdicts = list(read_stream(next(run.glob("verdicts-v*.jsonl"))))
        assert len(verdicts) == 6 * 3 * 2  # variants x systems x repeats
        for v in verdicts:
            assert v["majority"] in ("C", "P", "I")
            assert v["detection_score"] in (0.0, 0.5, 1.0)
            assert len(v["verdicts"]) == 3

    def test_claims_stream_valid(self, pipeline):
        _, run = pipeline
        claims = list(read_stream(next(run.glob("claims-v*.jsonl"))))
        assert claims
        for c in claims:
            assert c["valence"] in ("positive", "neutral", "negative")
            assert c["category"] in (
                "Competency", "Funding", "Timeline", "Alignment", "Clarity", "Impact", "Ethics",
            )
            assert c["aspect"] and len(c["aspect"].split()) <= 3

    def test_report_files(self, pipeline):
        _, run = pipeline
        report = run / "report"
        for name in (
            "detection.csv", "heatmap.csv", "heatmap.png",
            "reliability.csv", "run_summary.csv",
        ):
            assert (report / name).exists(), name
        heat = (report / "heatmap.csv").read_text().splitlines()
        assert heat[0].startswith("system,")
        assert len(heat) == 4  # header + 3 systems

    def test_stats_record_shape(self, pipeline):
        _, run = pipeline
        (stats,) = list(read_stream(next(run.glob("stats-v*.jsonl"))))
        assert {"reliability", "kruskal_wallis", "judge_agreement", "degradation"} <= set(stats)
        assert -1.0 <= stats["judge_agreement"]["krippendorff_alpha_nominal"] <= 1.0

    def test_manifest_ledgers(self, pipeline):
        _, run = pipeline
        manifest = json.loads((run / "manifest.json").read_text())
        assert manifest["seed"] == 1234
        assert manifest["stage_ledgers"]["reviews"]["total_tokens"] > 0
        assert manifest["corpus_digests"]


class TestDeterminism:
    def test_same_seed_byte_identical_streams(self, pipeline):
        tmp_path, run_a = pipeline
        run_b = _run_pipeline(tmp_path, "run-b")
        for stage in ("bundles", "variants", "reviews", "verdicts", "claims", "stats"):
            a = next(run_a.glob(f"{stage}-v*.jsonl")).read_bytes()
            b = next(run_b.glob(f"{stage}-v*.jsonl")).read_bytes()
            assert a == b, f"stream {stage} differs between identical runs"


class TestCliErrors:
    def test_unknown_subcommand_nonzero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code != 0

    def test_missing_run_dir_is_error(self, tmp_path):
        assert main(["perturb", "--run", str(tmp_path / "nope")]) == 1

    def test_review_five_repeats_gives_five_records_per_target(self, tmp_path):
        corpus = copy_demo_corpus(tmp_path / "c")
        run = tmp_path / "r"
        assert main(["ingest", "--corpus", str(corpus), "--run", str(run)]) == 0
        assert main([
            "review", "--run", str(run), "--system", "council",
            "--repeats", "5", "--targets", "originals",
        ]) == 0
        reviews = list(read_stream(next(run.glob("reviews-v*.jsonl"))))
        assert len(reviews) == 5
        assert {r["run_index"] for r in reviews} == set(range(5))
