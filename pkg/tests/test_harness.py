from __future__ import annotations

import csv
import json

import pytest

from grantprobe.errors import EmptyInput
from grantprobe.harness import (
    detection_report,
    latest_stream,
    load_config,
    read_stream,
    reliability_report,
    write_stream,
)
from grantprobe.harness.reporting import (
    micro_score,
    render_heatmap,
    write_detection_csv,
    write_heatmap_csv,
)


class TestRecords:
    def test_versioned_files_never_mutate(self, tmp_path):
        p1 = write_stream(tmp_path, "reviews", [{"a": 1}])
        first_bytes = p1.read_bytes()
        p2 = write_stream(tmp_path, "reviews", [{"a": 2}])
        assert p1 != p2
        assert p1.read_bytes() == first_bytes
        assert latest_stream(tmp_path, "reviews") == p2

    def test_schema_field_stamped(self, tmp_path):
        path = write_stream(tmp_path, "claims", [{"x": 1}])
        records = list(read_stream(path))
        assert records[0]["schema"] == "grantprobe/claims@1"

    def test_index_tracks_all_versions(self, tmp_path):
        write_stream(tmp_path, "reviews", [{"a": 1}])
        write_stream(tmp_path, "reviews", [{"a": 2}])
        index = json.loads((tmp_path / "index.json").read_text())
        assert index["reviews"] == ["reviews-v0001.jsonl", "reviews-v0002.jsonl"]

    def test_serialization_canonical(self, tmp_path):
        a = write_stream(tmp_path / "a", "s", [{"b": 1, "a": 2}])
        b = write_stream(tmp_path / "b", "s", [{"a": 2, "b": 1}])
        assert a.read_bytes() == b.read_bytes()


class TestConfig:
    def test_defaults(self):
        cfg = load_config(None)
        assert cfg.transport == "mock"
        assert len(cfg.judges) == 3

    def test_yaml_and_env_override(self, tmp_path, monkeypatch):
        config_file = tmp_path / "config.yaml"
        config_file.write_text(
            "seed: 7\ntransport: http\nthresholds:\n  match_similarity: 0.6\n"
        )
        cfg = load_config(config_file)
        assert (cfg.seed, cfg.transport, cfg.match_similarity) == (7, "http", 0.6)
        monkeypatch.setenv("GRANTPROBE_TRANSPORT", "mock")
        monkeypatch.setenv("GRANTPROBE_SEED", "99")
        cfg = load_config(config_file)
        assert (cfg.seed, cfg.transport) == (99, "mock")

    def test_digest_stable(self):
        assert load_config(None).digest() == load_config(None).digest()

    def test_judge_count_enforced(self, tmp_path):
        config_file = tmp_path / "config.yaml"
        config_file.write_text("judges:\n  - {model: a}\n  - {model: b}\n")
        with pytest.raises(ValueError):
            load_config(config_file)


def _verdict(system, pid, majority, score):
    return {
        "system": system,
        "perturbation_id": pid,
        "majority": majority,
        "detection_score": score,
    }


class TestDetectionReport:
    AXES = {"f1": "funding", "f2": "funding", "c1": "clarity"}

    def test_counts_equal_group_by(self):
        records = (
            [_verdict("baseline", "f1", "C", 1.0)] * 3
            + [_verdict("baseline", "f2", "P", 0.5)] * 2
            + [_verdict("baseline", "c1", "I", 0.0)] * 5
            + [_verdict("council", "f1", "I", 0.0)] * 4
        )
        table = detection_report(records, self.AXES)
        cell = table.cells[("baseline", "funding")]
        assert (cell.correct, cell.partial, cell.incorrect) == (3, 2, 0)
        overall = table.overall["baseline"]
        assert (overall.correct, overall.partial, overall.incorrect) == (3, 2, 5)
        assert table.overall["council"].incorrect == 4

    def test_micro_formula(self):
        assert micro_score(159, 20, 440) == pytest.approx((159 + 10) / 619)

    def test_macro_is_mean_of_per_perturbation_means(self):
        records = [
            _verdict("baseline", "f1", "C", 1.0),
            _verdict("baseline", "f1", "I", 0.0),
            _verdict("baseline", "f2", "I", 0.0),
        ]
        table = detection_report(records, self.AXES)
        cell = table.cells[("baseline", "funding")]
        assert cell.micro == pytest.approx(1 / 3)
        assert cell.macro == pytest.approx((0.5 + 0.0) / 2)

    def test_all_incorrect_gives_zero_cells(self):
        records = [_verdict("baseline", "f1", "I", 0.0)] * 6
        table = detection_report(records, self.AXES)
        assert table.cells[("baseline", "funding")].micro == 0.0
        assert table.overall["baseline"].macro == 0.0

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            detection_report([], {})

    def test_csv_and_heatmap_outputs(self, tmp_path):
        records = [
            _verdict("baseline", "f1", "C", 1.0),
            _verdict("section_level", "c1", "P", 0.5),
        ]
        table = detection_report(records, self.AXES)
        det = write_detection_csv(table, tmp_path / "detection.csv")
        heat = write_heatmap_csv(table, tmp_path / "heatmap.csv")
        png = render_heatmap(table, tmp_path / "heatmap.png")
        with det.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["system", "axis", "C", "P", "I", "n", "micro", "macro"]
        with heat.open() as fh:
            heat_rows = list(csv.reader(fh))
        assert heat_rows[0][0] == "system"
        assert set(heat_rows[0][1:]) == {"funding", "clarity"}
        assert png.stat().st_size > 0


class TestReliabilityReport:
    def _review(self, system, target, run_index, score):
        return {
            "system": system, "target": target, "run_index": run_index,
            "score": score, "effort": "high",
        }

    def test_planted_variance_recovered(self):
        import random

        rng = random.Random(5)
        records = []
        # two systems: one consistent (target effects dominate), one noisy
        for t, base in enumerate((1.0, 3.0, 5.0, 6.0)):
            for r in range(3):
                records.append(self._review("consistent", f"t{t}", r, base))
                records.append(self._review("noisy", f"t{t}", r, rng.uniform(1, 6)))
        rows = {r["system"]: r for r in reliability_report(records)}
        assert rows["consistent"]["icc21"] == pytest.approx(1.0)
        assert rows["noisy"]["icc21"] < rows["consistent"]["icc21"]

    def test_constant_scores_flagged(self):
        records = [
            self._review("flat", f"t{t}", r, 4.0) for t in range(3) for r in range(2)
        ]
        (row,) = reliability_report(records)
        assert row["flag"] == "all_zero_variance"
        assert row["icc21"] is None

    def test_degenerate_system_reported_not_fatal(self):
        records = [self._review("tiny", "t0", 0, 4.0)]
        for t in range(3):
            for r in range(2):
                records.append(self._review("ok", f"t{t}", r, float(t + r + 1)))
        rows = {r["system"]: r for r in reliability_report(records)}
        assert "degenerate" in rows["tiny"]["flag"]
        assert "icc21" in rows["ok"]
