"""Canonical markdown serialization and unified diffs."""
from __future__ import annotations

import difflib

from .model import BudgetTable, DiffText, GanttTable, ProposalBundle
from .parse import BUDGET_COLUMNS

PROPOSAL_LABEL = "proposal.md"
OPPORTUNITY_LABEL_FILE = "opportunity.md"


def _format_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    widths = [max(w, 3) for w in widths]

    def fmt(cells: list[str]) -> str:
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    lines = [fmt(header), "| " + " | ".join("-" * w for w in widths) + " |"]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines)


def serialize_gantt(g: GanttTable) -> str:
    """Markdown table with ``####`` for shaded cells, columns padded to align."""
    header = [g.label_header, *g.periods]
    rows = [
        [label, *("####" if c else "" for c in cells)] for label, cells in g.tasks
    ]
    return _format_table(header, rows)


def _pounds(v: int) -> str:
    return f"£{v:,}"


def _fte(v: float) -> str:
    return f"{v:g}%"


def serialize_budget(b: BudgetTable) -> str:
    row = [
        _pounds(b.full_funding), _pounds(b.org_contribution), _pounds(b.applied),
        _pounds(b.da_staff), _pounds(b.da_estates), _pounds(b.da_other),
        _fte(b.fte_percent),
        _pounds(b.di_staff), _pounds(b.di_equipment), _pounds(b.di_travel),
        _pounds(b.di_other),
    ]
    return _format_table(list(BUDGET_COLUMNS), [row])


def serialize_bundle(bundle: ProposalBundle) -> dict[str, str]:
    """Canonical labelled documents for diffing and prompting.

    Tables live inside section bodies, so the proposal document is just the
    sections in ordinal order.
    """
    parts = [f"## {s.heading}\n\n{s.body}" for s in bundle.sections]
    proposal = "\n\n".join(parts) + "\n"
    opp = bundle.opportunity
    opportunity = (
        f"# {opp.call_id}\n\n"
        f"## Aims\n\n{opp.aims}\n\n"
        f"## What we're looking for\n\n{opp.looking_for}\n\n"
        f"## Assessment guidelines\n\n{opp.guidelines}\n"
    )
    return {PROPOSAL_LABEL: proposal, OPPORTUNITY_LABEL_FILE: opportunity}


def unified_diff(original: ProposalBundle, variant: ProposalBundle) -> DiffText:
    """Unified diff (3 lines of context) between two bundles.

    Deterministic for identical inputs; empty when the serialized documents
    are identical.
    """
    docs_a = serialize_bundle(original)
    docs_b = serialize_bundle(variant)
    files: list[tuple[str, str]] = []
    for label in docs_a:
        a, b = docs_a[label], docs_b.get(label, "")
        if a == b:
            continue
        hunk = "".join(
            difflib.unified_diff(
                a.splitlines(keepends=True),
                b.splitlines(keepends=True),
                fromfile=f"a/{label}",
                tofile=f"b/{label}",
                n=3,
            )
        )
        files.append((label, hunk))
    return DiffText(text="".join(h for _, h in files), files=tuple(files))
