"""Taxonomy loading and prompt vocabulary."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources

import yaml

from .model import TaxonomyCategory


@lru_cache(maxsize=1)
def load_taxonomy() -> list[dict]:
    data = resources.files("grantprobe.claims").joinpath("taxonomy.yaml").read_text("utf-8")
    taxonomy = yaml.safe_load(data)
    axes = [entry["axis"] for entry in taxonomy]
    expected = [c.value for c in TaxonomyCategory]
    if sorted(axes) != sorted(expected):
        raise ValueError(f"taxonomy axes {axes} do not match categories {expected}")
    return taxonomy


def taxonomy_vocabulary() -> str:
    """Flat axis/component/aspect listing used as classification context."""
    lines: list[str] = []
    for entry in load_taxonomy():
        lines.append(f"- {entry['axis']}")
        for component in entry["components"]:
            for sub in component["subcomponents"]:
                aspects = ", ".join(sub["aspects"])
                lines.append(f"    {component['name']} / {sub['name']}: {aspects}")
    return "\n".join(lines)


def aspects_for(category: TaxonomyCategory) -> list[str]:
    for entry in load_taxonomy():
        if entry["axis"] == category.value:
            return [
                aspect
                for component in entry["components"]
                for sub in component["subcomponents"]
                for aspect in sub["aspects"]
            ]
    return []
