"""Detection and reliability reports: delimited tables plus rendered figures."""
from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ..errors import AllZeroVariance, DegenerateMatrix, EmptyInput
from ..stats import ScoreMatrix, icc21, variance_components

AXIS_ORDER = ("funding", "timeline", "competency", "alignment", "clarity", "impact")
SYSTEM_ORDER = ("baseline", "section_level", "council")


@dataclass
class DetectionCell:
    correct: int = 0
    partial: int = 0
    incorrect: int = 0
    per_perturbation: dict[str, list[float]] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.correct + self.partial + self.incorrect

    @property
    def micro(self) -> float:
        if self.total == 0:
            return 0.0
        return (self.correct + 0.5 * self.partial) / self.total

    @property
    def macro(self) -> float:
        means = [sum(v) / len(v) for v in self.per_perturbation.values() if v]
        return sum(means) / len(means) if means else 0.0


@dataclass
class DetectionTable:
    cells: dict[tuple[str, str], DetectionCell]  # (system, axis) -> counts
    overall: dict[str, DetectionCell]  # per system

    def __post_init__(self) -> None:
        for cell in list(self.cells.values()) + list(self.overall.values()):
            if min(cell.correct, cell.partial, cell.incorrect) < 0:
                raise ValueError("counts must be >= 0")
            if not (0.0 <= cell.micro <= 1.0 and 0.0 <= cell.macro <= 1.0):
                raise ValueError("micro and macro must be in [0, 1]")

    def systems(self) -> list[str]:
        ordered = [s for s in SYSTEM_ORDER if s in self.overall]
        extras = sorted(set(self.overall) - set(ordered))
        return ordered + extras

    def axes(self) -> list[str]:
        present = {axis for _, axis in self.cells}
        ordered = [a for a in AXIS_ORDER if a in present]
        return ordered + sorted(present - set(AXIS_ORDER))


def micro_score(correct: int, partial: int, incorrect: int) -> float:
    total = correct + partial + incorrect
    if total == 0:
        return 0.0
    return (correct + 0.5 * partial) / total


def detection_report(
    verdict_records: Sequence[Mapping],
    axis_by_perturbation: Mapping[str, str],
) -> DetectionTable:
    """Aggregate panel verdicts into per-(system, axis) counts.

    Each verdict record needs ``system``, ``perturbation_id``, ``majority``
    and ``detection_score`` fields.
    """
    if not verdict_records:
        raise EmptyInput("verdict_records")
    cells: dict[tuple[str, str], DetectionCell] = defaultdict(DetectionCell)
    overall: dict[str, DetectionCell] = defaultdict(DetectionCell)
    for record in verdict_records:
        system = record["system"]
        perturbation = record["perturbation_id"]
        axis = axis_by_perturbation.get(perturbation, "unknown")
        for cell in (cells[(system, axis)], overall[system]):
            if record["majority"] == "C":
                cell.correct += 1
            elif record["majority"] == "P":
                cell.partial += 1
            else:
                cell.incorrect += 1
            cell.per_perturbation.setdefault(perturbation, []).append(
                float(record["detection_score"])
            )
    return DetectionTable(cells=dict(cells), overall=dict(overall))


def write_detection_csv(table: DetectionTable, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["system", "axis", "C", "P", "I", "n", "micro", "macro"])
        for system in table.systems():
            for axis in table.axes():
                cell = table.cells.get((system, axis))
                if cell is None:
                    continue
                writer.writerow(
                    [system, axis, cell.correct, cell.partial, cell.incorrect,
                     cell.total, f"{cell.micro:.4f}", f"{cell.macro:.4f}"]
                )
            o = table.overall[system]
            writer.writerow(
                [system, "overall", o.correct, o.partial, o.incorrect,
                 o.total, f"{o.micro:.4f}", f"{o.macro:.4f}"]
            )
    return path


def write_heatmap_csv(table: DetectionTable, path: str | Path) -> Path:
    """System rows x axis columns of micro detection scores."""
    path = Path(path)
    axes = table.axes()
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["system", *axes])
        for system in table.systems():
            row = [system]
            for axis in axes:
                cell = table.cells.get((system, axis), DetectionCell())
                row.append(f"{cell.micro:.4f}")
            writer.writerow(row)
    return path


def render_heatmap(table: DetectionTable, path: str | Path) -> Path:
    """Detection-score heatmap figure (darker = higher detection)."""
    path = Path(path)
    systems = table.systems()
    axes = table.axes()
    matrix = [
        [table.cells.get((system, axis), DetectionCell()).micro for axis in axes]
        for system in systems
    ]
    fig, ax = plt.subplots(figsize=(1.6 + 1.1 * len(axes), 1.2 + 0.7 * len(systems)))
    im = ax.imshow(matrix, cmap="Blues", vmin=0.0, vmax=1.0, aspect="auto")
    ax.set_xticks(range(len(axes)), [a.capitalize() for a in axes], rotation=30, ha="right")
    ax.set_yticks(range(len(systems)), systems)
    for i in range(len(systems)):
        for j in range(len(axes)):
            value = matrix[i][j]
            ax.text(
                j, i, f"{value:.2f}", ha="center", va="center",
                color="white" if value > 0.5 else "black", fontsize=9,
            )
    ax.set_xlabel("Perturbation axis")
    ax.set_title("Detection score by review system and axis")
    fig.colorbar(im, ax=ax, shrink=0.85, label="micro detection score")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


# -- reliability -------------------------------------------------------------


def reliability_report(review_records: Sequence[Mapping]) -> list[dict]:
    """Per-system variance decomposition over (target x run) score matrices.

    Degenerate systems are reported with a flag instead of aborting the rest.
    """
    by_system: dict[str, dict[str, dict[int, float]]] = defaultdict(lambda: defaultdict(dict))
    for record in review_records:
        by_system[record["system"]][record["target"]][record["run_index"]] = float(
            record["score"]
        )
    rows: list[dict] = []
    for system in sorted(by_system):
        row: dict = {"system": system}
        try:
            matrix = ScoreMatrix.from_rows(by_system[system])
            comps = variance_components(matrix)
            between = comps.sigma2_p
            within = comps.sigma2_r + comps.sigma2_e
            row.update(
                {
                    "n_targets": matrix.values.shape[0],
                    "n_runs": matrix.values.shape[1],
                    "dropped_rows": len(matrix.dropped_rows),
                    "sigma2_total": between + within,
                    "sigma2_between": between,
                    "sigma2_within": within,
                    "clamped": list(comps.clamped),
                }
            )
            try:
                row["icc21"] = icc21(comps)
            except AllZeroVariance:
                row["icc21"] = None
                row["flag"] = "all_zero_variance"
        except DegenerateMatrix as exc:
            row.update({"flag": f"degenerate: {exc}"})
        rows.append(row)
    return rows


def write_reliability_csv(rows: Sequence[Mapping], path: str | Path) -> Path:
    path = Path(path)
    fields = [
        "system", "n_targets", "n_runs", "dropped_rows",
        "sigma2_total", "sigma2_between", "sigma2_within", "icc21", "flag",
    ]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in rows:
            out = []
            for f in fields:
                value = row.get(f, "")
                if isinstance(value, float):
                    value = f"{value:.4f}"
                out.append(value)
            writer.writerow(out)
    return path


def render_reliability_figure(rows: Sequence[Mapping], path: str | Path) -> Optional[Path]:
    """Stacked between/within variance bars with ICC annotations."""
    usable = [r for r in rows if "sigma2_between" in r]
    if not usable:
        return None
    path = Path(path)
    systems = [r["system"] for r in usable]
    between = [r["sigma2_between"] for r in usable]
    within = [r["sigma2_within"] for r in usable]
    fig, ax = plt.subplots(figsize=(1.5 + 1.2 * len(systems), 3.6))
    ax.bar(systems, between, label="between targets", color="#31688e")
    ax.bar(systems, within, bottom=between, label="within (runs + residual)", color="#b5c7d3")
    for i, row in enumerate(usable):
        icc = row.get("icc21")
        if icc is not None:
            ax.text(i, between[i] + within[i], f"ICC {icc:.2f}", ha="center", va="bottom", fontsize=9)
    ax.set_ylabel("score variance")
    ax.set_title("Variance decomposition by review system")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_run_summary_csv(stage_ledgers: Mapping[str, Mapping], path: str | Path) -> Path:
    """Wall clock and token totals per stage, runtime-table shaped."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["stage", "wall_clock", "input_tokens", "output_tokens", "total_tokens"])
        for stage in sorted(stage_ledgers):
            ledger = stage_ledgers[stage]
            ms = int(ledger.get("wall_ms", 0))
            seconds = ms // 1000
            clock = f"{seconds // 3600:02d}:{(seconds % 3600) // 60:02d}:{seconds % 60:02d}"
            inp = int(ledger.get("prompt_tokens", 0))
            out = int(ledger.get("completion_tokens", 0))
            writer.writerow([stage, clock, inp, out, inp + out])
    return path
