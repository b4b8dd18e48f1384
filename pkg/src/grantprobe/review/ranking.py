"""Parsing and aggregating council peer rankings."""
from __future__ import annotations

import re
from typing import Sequence

from ..errors import InconsistentLabelSets, RankingParseFailed

_HEADER_RE = re.compile(r"^FINAL RANKING:\s*$")
_ITEM_RE = re.compile(r"^(\d+)\.\s+Review ([A-Za-z])\s*$")


def parse_final_ranking(text: str, expected_labels: Sequence[str]) -> list[str]:
    """Labels in ranked order from the strict ``FINAL RANKING:`` block.

    The last header line wins; items must follow immediately (blank lines
    aside), numbered 1..n, one ``Review X`` per line, nothing after.  Any
    deviation (prose inside the block, duplicate or unknown labels, missing
    entries) raises :class:`RankingParseFailed`.
    """
    expected = list(expected_labels)
    lines = text.split("\n")
    header_idx = None
    for i, line in enumerate(lines):
        if _HEADER_RE.match(line.strip("\r")):
            header_idx = i
    if header_idx is None:
        raise RankingParseFailed("missing FINAL RANKING: header")

    ranked: list[str] = []
    expected_number = 1
    for line in lines[header_idx + 1 :]:
        stripped = line.strip()
        if not stripped:
            continue
        if len(ranked) == len(expected):
            raise RankingParseFailed(f"unexpected text after ranking: {stripped!r}")
        m = _ITEM_RE.match(stripped)
        if not m:
            raise RankingParseFailed(f"expected a numbered 'Review X' line, got {stripped!r}")
        if int(m.group(1)) != expected_number:
            raise RankingParseFailed(
                f"items must be numbered consecutively from 1; got {m.group(1)}"
            )
        label = m.group(2)
        if label not in expected:
            raise RankingParseFailed(f"unknown label {label!r}")
        if label in ranked:
            raise RankingParseFailed(f"duplicate label {label!r}")
        ranked.append(label)
        expected_number += 1

    if len(ranked) != len(expected):
        raise RankingParseFailed(
            f"ranking lists {len(ranked)} of {len(expected)} expected labels"
        )
    return ranked


def position_sums(rankings: Sequence[Sequence[str]]) -> dict[str, int]:
    sums: dict[str, int] = {}
    for ranking in rankings:
        for position, label in enumerate(ranking, start=1):
            sums[label] = sums.get(label, 0) + position
    return sums


def aggregate_rankings(rankings: Sequence[Sequence[str]]) -> list[str]:
    """Borda aggregation: ascending position sums, ties broken lexically.

    Every ranking must be a permutation of the same label set.
    """
    if not rankings:
        raise InconsistentLabelSets("no rankings to aggregate")
    label_set = set(rankings[0])
    for ranking in rankings:
        if set(ranking) != label_set or len(ranking) != len(label_set):
            raise InconsistentLabelSets(
                f"ranking {list(ranking)} is not a permutation of {sorted(label_set)}"
            )
    sums = position_sums(rankings)
    return sorted(label_set, key=lambda lab: (sums[lab], lab))


def aggregate_partial_rankings(rankings: Sequence[Sequence[str]]) -> list[str]:
    """Position-sum aggregation where each ranking may omit members.

    Used for council peer rankings: every reviewer ranks the other four,
    so each persona appears in exactly four rankings and sums stay
    comparable.  Ties break lexically.
    """
    sums = position_sums(rankings)
    return sorted(sums, key=lambda lab: (sums[lab], lab))
