"""Bundled demo corpus: one synthetic proposal with every perturbation
surface present (narrative, gantt, budget, opportunity)."""
from __future__ import annotations

import shutil
from importlib import resources
from pathlib import Path

import yaml

from ..corpus import ProposalBundle, parse_proposal

DEMO_FILES = (
    "opportunity.md",
    "case_for_support.md",
    "team.md",
    "resources.md",
)


def demo_dir():
    return resources.files("grantprobe.data").joinpath("demo")


def demo_files() -> dict[str, str]:
    root = demo_dir()
    return {name: root.joinpath(name).read_text("utf-8") for name in DEMO_FILES}


def demo_manifest() -> dict:
    return yaml.safe_load(demo_dir().joinpath("manifest.yaml").read_text("utf-8"))


def demo_bundle() -> ProposalBundle:
    manifest = demo_manifest()
    hints = {k: v for k, v in manifest["files"].items() if v != "auto"}
    return parse_proposal(demo_files(), hints, proposal_id=manifest["proposal_id"])


def copy_demo_corpus(dest: str | Path) -> Path:
    """Materialise the demo corpus on disk (dest/demo/...); returns the
    corpus root suitable for ``grantprobe ingest --corpus``."""
    dest = Path(dest)
    target = dest / "demo"
    target.mkdir(parents=True, exist_ok=True)
    root = demo_dir()
    for name in (*DEMO_FILES, "manifest.yaml"):
        shutil.copy(str(root.joinpath(name)), target / name)
    return dest
