"""Markdown ingest: sections, Gantt and budget tables, opportunities."""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from ..errors import EmptyCorpus, MalformedTable
from .kinds import SectionKind
from .model import BudgetTable, GanttTable, Opportunity, ProposalBundle, Section

#: Manifest hint value marking a file as the funding-opportunity document.
OPPORTUNITY_LABEL = "opportunity"

_HEADING_RE = re.compile(r"^(#{1,3})\s+(.+?)\s*$", re.MULTILINE)

_KIND_ALIASES: dict[str, SectionKind] = {
    "summary": SectionKind.SUMMARY,
    "vision": SectionKind.VISION_AND_APPROACH,
    "approach": SectionKind.VISION_AND_APPROACH,
    "vision and approach": SectionKind.VISION_AND_APPROACH,
    "case for support": SectionKind.VISION_AND_APPROACH,
    "team capability": SectionKind.TEAM_CAPABILITY,
    "capability to deliver": SectionKind.TEAM_CAPABILITY,
    "applicant and team capability to deliver": SectionKind.TEAM_CAPABILITY,
    "team capability to deliver": SectionKind.TEAM_CAPABILITY,
    "core team": SectionKind.CORE_TEAM,
    "project partners": SectionKind.PROJECT_PARTNERS,
    "facilities": SectionKind.FACILITIES,
    "resources": SectionKind.RESOURCES_AND_COSTS,
    "resources and costs": SectionKind.RESOURCES_AND_COSTS,
    "justification of resources": SectionKind.RESOURCES_AND_COSTS,
    "ethics": SectionKind.ETHICS_RRI,
    "ethics and rri": SectionKind.ETHICS_RRI,
    "ethics and responsible research and innovation": SectionKind.ETHICS_RRI,
    "human participants": SectionKind.HUMAN_PARTICIPANTS,
    "research involving human participants": SectionKind.HUMAN_PARTICIPANTS,
    "references": SectionKind.REFERENCES,
    "bibliography": SectionKind.REFERENCES,
    "thematic alignment": SectionKind.THEMATIC_ALIGNMENT,
    "epsrc thematic area alignment": SectionKind.THEMATIC_ALIGNMENT,
    "letters of support": SectionKind.LETTERS_OF_SUPPORT,
    "letter of support": SectionKind.LETTERS_OF_SUPPORT,
}


def _normalize_heading(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", " ", text.lower()).strip()


def kind_for_heading(heading: str) -> SectionKind:
    return _KIND_ALIASES.get(_normalize_heading(heading), SectionKind.OTHER)


def normalize_text(text: str) -> str:
    """Canonical LF-only encoding so diffs are platform-stable."""
    return text.replace("\r\n", "\n").replace("\r", "\n")


# -- markdown tables ----------------------------------------------------------

@dataclass(frozen=True)
class TableBlock:
    start: int  # char offset of the first table line in the body
    end: int  # char offset one past the final table line (excl. trailing \n)
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    raw: str


def _split_row(line: str) -> tuple[str, ...]:
    inner = line.strip()
    if inner.startswith("|"):
        inner = inner[1:]
    if inner.endswith("|"):
        inner = inner[:-1]
    return tuple(cell.strip() for cell in inner.split("|"))


_SEPARATOR_CELL_RE = re.compile(r"^:?-{2,}:?$|^-+$")


def _is_separator(cells: Iterable[str]) -> bool:
    cells = list(cells)
    return bool(cells) and all(_SEPARATOR_CELL_RE.match(c) for c in cells)


def iter_tables(body: str) -> list[TableBlock]:
    """All pipe tables in a markdown body, in document order."""
    tables: list[TableBlock] = []
    lines = body.split("\n")
    offsets: list[int] = []
    pos = 0
    for line in lines:
        offsets.append(pos)
        pos += len(line) + 1

    i = 0
    while i < len(lines):
        if lines[i].lstrip().startswith("|") and i + 1 < len(lines):
            second = _split_row(lines[i + 1]) if lines[i + 1].lstrip().startswith("|") else ()
            if second and _is_separator(second):
                header = _split_row(lines[i])
                rows = []
                j = i + 2
                while j < len(lines) and lines[j].lstrip().startswith("|"):
                    rows.append(_split_row(lines[j]))
                    j += 1
                end = offsets[j - 1] + len(lines[j - 1])
                tables.append(
                    TableBlock(
                        start=offsets[i],
                        end=end,
                        header=header,
                        rows=tuple(rows),
                        raw=body[offsets[i]:end],
                    )
                )
                i = j
                continue
        i += 1
    return tables


def is_gantt_table(tb: TableBlock) -> bool:
    """A table is a Gantt iff >=1 body cell is ``####`` and all body cells
    (first column excluded) are ``####`` or blank."""
    body_cells = [c for row in tb.rows for c in row[1:]]
    if not body_cells:
        return False
    return any(c == "####" for c in body_cells) and all(
        c in ("####", "") for c in body_cells
    )


def is_budget_table(tb: TableBlock) -> bool:
    return any("full funding" in _normalize_heading(h) for h in tb.header)


def parse_gantt(tb: TableBlock) -> GanttTable:
    n_periods = len(tb.header) - 1
    tasks = []
    for idx, row in enumerate(tb.rows):
        if len(row) != len(tb.header):
            raise MalformedTable(
                f"gantt row {idx} has {len(row)} cells, expected {len(tb.header)}",
                row_index=idx,
            )
        tasks.append((row[0], tuple(c == "####" for c in row[1:])))
    return GanttTable(
        tasks=tuple(tasks),
        periods=tuple(tb.header[1:]),
        label_header=tb.header[0] or "Task",
    )


_CURRENCY_RE = re.compile(r"^£(\d{1,3}(?:,\d{3})*|\d+)$")


def parse_currency(text: str) -> int:
    """Whole pounds from a ``£``-prefixed digit group with comma separators."""
    m = _CURRENCY_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a currency value: {text!r}")
    return int(m.group(1).replace(",", ""))


def _parse_percent(text: str) -> float:
    m = re.match(r"^(\d+(?:\.\d+)?)\s*%$", text.strip())
    if not m:
        raise ValueError(f"not a percentage: {text!r}")
    return float(m.group(1))


#: Canonical budget column order; serialization mirrors it.
BUDGET_COLUMNS = (
    "Full Funding", "Org Contribution", "Applied",
    "Staff (DA)", "Estates (DA)", "Other (DA)", "Staff FTE %",
    "Staff (DI)", "Equipment (DI)", "Travel (DI)", "Other (DI)",
)


def parse_budget(tb: TableBlock) -> BudgetTable:
    if len(tb.header) != len(BUDGET_COLUMNS):
        raise MalformedTable(
            f"budget header has {len(tb.header)} columns, expected {len(BUDGET_COLUMNS)}"
        )
    if not tb.rows:
        raise MalformedTable("budget table has no value row")
    row = tb.rows[0]
    if len(row) != len(BUDGET_COLUMNS):
        raise MalformedTable(
            f"budget row 0 has {len(row)} cells, expected {len(BUDGET_COLUMNS)}",
            row_index=0,
        )
    try:
        values = [parse_currency(c) for c in row[:6]]
        fte = _parse_percent(row[6])
        values += [parse_currency(c) for c in row[7:]]
    except ValueError as exc:
        raise MalformedTable(f"budget row 0: {exc}", row_index=0) from exc
    return BudgetTable(
        full_funding=values[0], org_contribution=values[1], applied=values[2],
        da_staff=values[3], da_estates=values[4], da_other=values[5],
        fte_percent=fte,
        di_staff=values[6], di_equipment=values[7], di_travel=values[8],
        di_other=values[9],
    )


# -- documents ----------------------------------------------------------------

def _split_sections(text: str, file_label: str) -> list[tuple[str, str]]:
    """(heading, body) pairs from a markdown file, in appearance order.

    Splits only at the file's top heading level, so deeper headings stay
    nested inside section bodies.
    """
    matches = list(_HEADING_RE.finditer(text))
    pairs: list[tuple[str, str]] = []
    if not matches:
        if text.strip():
            pairs.append((file_label, text.strip("\n")))
        return pairs
    top_level = min(len(m.group(1)) for m in matches)
    splits = [m for m in matches if len(m.group(1)) == top_level]
    preamble = text[: splits[0].start()]
    if preamble.strip():
        pairs.append((file_label, preamble.strip("\n")))
    for i, m in enumerate(splits):
        end = splits[i + 1].start() if i + 1 < len(splits) else len(text)
        body = text[m.end():end].strip("\n")
        pairs.append((m.group(2), body))
    return pairs


def parse_opportunity(text: str, call_id: str = "") -> Opportunity:
    text = normalize_text(text)
    m = re.search(r"^#\s+(.+?)\s*$", text, re.MULTILINE)
    if m:
        call_id = m.group(1)
        text = text[: m.start()] + text[m.end():]
    fields = {"aims": "", "looking_for": "", "guidelines": ""}
    for heading, body in _split_sections(text, call_id or "opportunity"):
        key = _normalize_heading(heading)
        if key == "aims":
            fields["aims"] = body
        elif key in ("what we re looking for", "what we are looking for", "looking for"):
            fields["looking_for"] = body
        elif key in ("assessment guidelines", "guidelines", "review guidelines"):
            fields["guidelines"] = body
    return Opportunity(call_id=call_id, **fields)


def parse_proposal(
    markdown_files: Mapping[str, str],
    manifest: Mapping[str, str] | None = None,
    proposal_id: str = "proposal",
) -> ProposalBundle:
    """Build a :class:`ProposalBundle` from labelled markdown files.

    ``manifest`` maps file labels to section-kind hints (``SectionKind``
    values) or the special value ``opportunity``.  A hint overrides heading
    detection when the file yields a single section.
    """
    if not markdown_files:
        raise EmptyCorpus("no input files")
    manifest = dict(manifest or {})
    unknown = set(manifest) - set(markdown_files)
    if unknown:
        raise ValueError(f"manifest labels not in files: {sorted(unknown)}")

    opportunity: Opportunity | None = None
    sections: list[Section] = []
    provenance: dict[str, str] = {}
    ordinal = 0

    for label, raw in markdown_files.items():
        text = normalize_text(raw)
        provenance[label] = hashlib.sha256(text.encode("utf-8")).hexdigest()
        hint = manifest.get(label)
        if hint == OPPORTUNITY_LABEL:
            opportunity = parse_opportunity(text, call_id=label)
            continue
        pairs = _split_sections(text, label)
        for heading, body in pairs:
            kind = kind_for_heading(heading)
            if hint and len(pairs) == 1:
                kind = SectionKind(hint)
            sections.append(Section(kind=kind, heading=heading, body=body, ordinal=ordinal))
            ordinal += 1

    if opportunity is None:
        raise ValueError(
            "corpus has no opportunity document (add a manifest entry with "
            f"the hint {OPPORTUNITY_LABEL!r})"
        )

    gantt: GanttTable | None = None
    budget: BudgetTable | None = None
    for section in sections:
        for tb in iter_tables(section.body):
            if gantt is None and is_gantt_table(tb):
                gantt = parse_gantt(tb)
            elif budget is None and is_budget_table(tb):
                budget = parse_budget(tb)

    return ProposalBundle(
        proposal_id=proposal_id,
        sections=tuple(sections),
        opportunity=opportunity,
        gantt=gantt,
        budget=budget,
        provenance=provenance,
    )
