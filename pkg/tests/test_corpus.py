from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grantprobe.corpus import (
    BudgetTable,
    GanttTable,
    SectionGroup,
    SectionKind,
    make_context,
    parse_currency,
    parse_proposal,
    serialize_bundle,
    serialize_gantt,
    unified_diff,
)
from grantprobe.corpus.parse import is_gantt_table, iter_tables, parse_gantt
from grantprobe.errors import EmptyCorpus, EmptyGroup, MalformedTable

OPP = """# CALL-X

## Aims

Fund things.

## What we're looking for

Good things.

## Assessment guidelines

Score 1-6.
"""


def _mini_files(body: str) -> dict[str, str]:
    return {"opportunity.md": OPP, "proposal.md": body}


def _mini_bundle(body: str, proposal_id: str = "p1"):
    return parse_proposal(
        _mini_files(body), {"opportunity.md": "opportunity"}, proposal_id=proposal_id
    )


class TestParseProposal:
    def test_two_headings_get_dense_ordinals(self):
        b = _mini_bundle("# Vision\n\nBody one.\n\n# References\n\n1. Ref.")
        assert [s.ordinal for s in b.sections] == [0, 1]
        assert b.sections[0].kind == SectionKind.VISION_AND_APPROACH
        assert b.sections[1].kind == SectionKind.REFERENCES

    def test_gantt_detected_from_shading_convention(self):
        body = (
            "# Vision\n\nText.\n\n"
            "| Task | M1 | M2 | M3 | M4 |\n"
            "| --- | --- | --- | --- | --- |\n"
            "| WP1 | #### | #### |  |  |\n"
        )
        b = _mini_bundle(body)
        assert b.gantt is not None
        assert b.gantt.span("WP1") == (0, 1)
        assert b.gantt.periods == ("M1", "M2", "M3", "M4")

    def test_budget_row_from_summary_totals_header(self, bundle):
        assert bundle.budget is not None
        assert bundle.budget.full_funding == 25_000
        assert bundle.budget.org_contribution == 5_000
        assert bundle.budget.applied == 20_000

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            parse_proposal({}, {})

    def test_ragged_gantt_reports_row_index(self):
        body = (
            "# Vision\n\n"
            "| Task | M1 | M2 |\n"
            "| --- | --- | --- |\n"
            "| WP1 | #### |\n"
        )
        tables = iter_tables(body)
        assert tables and is_gantt_table(tables[0])
        with pytest.raises(MalformedTable) as exc:
            parse_gantt(tables[0])
        assert exc.value.row_index == 0

    def test_unknown_heading_preserved_as_other(self):
        b = _mini_bundle("# Frobnication Plan\n\nStuff.")
        assert b.sections[0].kind == SectionKind.OTHER
        assert b.sections[0].heading == "Frobnication Plan"

    def test_manifest_hint_overrides_single_section_file(self):
        files = {**_mini_files("# Vision\n\nV."), "extra.md": "Overview text only."}
        b = parse_proposal(
            files,
            {"opportunity.md": "opportunity", "extra.md": "summary"},
            proposal_id="p1",
        )
        kinds = {s.kind for s in b.sections}
        assert SectionKind.SUMMARY in kinds

    def test_digests_stable_under_reingest(self):
        files = _mini_files("# Vision\n\nSame bytes.")
        one = parse_proposal(files, {"opportunity.md": "opportunity"})
        two = parse_proposal(files, {"opportunity.md": "opportunity"})
        assert one.provenance == two.provenance


class TestCurrency:
    @pytest.mark.parametrize(
        "text,value",
        [("£25,000", 25_000), ("£480", 480), ("£1,234,567", 1_234_567), ("£0", 0)],
    )
    def test_parse(self, text, value):
        assert parse_currency(text) == value

    @pytest.mark.parametrize("text", ["25,000", "£25.50", "£25,00", "EUR 5"])
    def test_reject(self, text):
        with pytest.raises(ValueError):
            parse_currency(text)

    def test_budget_identity_enforced(self):
        with pytest.raises(ValueError):
            BudgetTable(
                full_funding=25_000, org_contribution=5_000, applied=19_000,
                da_staff=0, da_estates=0, da_other=0, fte_percent=40,
                di_staff=0, di_equipment=0, di_travel=0, di_other=0,
            )

    @pytest.mark.parametrize("applied,org", [(20_000, 5_000), (4_000, 21_000), (25_000, 0)])
    def test_budget_identity_appendix_values(self, applied, org):
        table = BudgetTable(
            full_funding=25_000, org_contribution=org, applied=applied,
            da_staff=applied, da_estates=0, da_other=0, fte_percent=40,
            di_staff=0, di_equipment=0, di_travel=0, di_other=0,
        )
        assert table.applied == table.full_funding - table.org_contribution


class TestGanttSerialize:
    def test_both_shaded(self):
        g = GanttTable(tasks=(("T", (True, True)),), periods=("M1", "M2"))
        assert "| #### | #### |" in serialize_gantt(g)

    def test_zero_tasks_header_and_separator_only(self):
        g = GanttTable(tasks=(), periods=("M1", "M2"))
        assert len(serialize_gantt(g).split("\n")) == 2

    def test_round_trip_shaded_3_4_of_6(self):
        cells = tuple(i in (2, 3) for i in range(6))
        g = GanttTable(tasks=(("WP", cells),), periods=tuple(f"M{i+1}" for i in range(6)))
        text = serialize_gantt(g)
        tables = iter_tables(text)
        assert len(tables) == 1 and is_gantt_table(tables[0])
        assert parse_gantt(tables[0]) == g

    @given(
        st.lists(
            st.tuples(
                st.text(alphabet="abcdefgWP123 ", min_size=1, max_size=12).map(str.strip).filter(bool),
                st.lists(st.booleans(), min_size=1, max_size=8),
            ),
            min_size=0,
            max_size=5,
        ).filter(lambda tasks: len({t[0] for t in tasks}) == len(tasks))
    )
    @settings(max_examples=50, deadline=None)
    def test_round_trip_property(self, tasks):
        if tasks:
            width = len(tasks[0][1])
            tasks = [(label, tuple((cells + [False] * width)[:width])) for label, cells in tasks]
        else:
            width = 3
        if not any(c for _, cells in tasks for c in cells):
            return  # unshaded tables are not gantts by detection rule
        g = GanttTable(
            tasks=tuple(tasks), periods=tuple(f"M{i+1}" for i in range(width))
        )
        tables = iter_tables(serialize_gantt(g))
        assert len(tables) == 1 and is_gantt_table(tables[0])
        assert parse_gantt(tables[0]) == g


class TestMakeContext:
    def test_ethics_group_skips_absent_members(self):
        b = _mini_bundle("# Summary\n\nS.\n\n# Ethics\n\nE.")
        sections = make_context(b, SectionGroup.ETHICS)
        assert [s.kind for s in sections] == [SectionKind.SUMMARY, SectionKind.ETHICS_RRI]

    def test_vision_group_on_full_bundle(self, bundle):
        sections = make_context(bundle, SectionGroup.VISION_APPROACH)
        assert [s.kind for s in sections] == [
            SectionKind.VISION_AND_APPROACH,
            SectionKind.REFERENCES,
        ]

    def test_single_member_is_not_empty(self):
        b = _mini_bundle("# References\n\n1. Only refs.")
        sections = make_context(b, SectionGroup.TEAM_CAPABILITY)
        assert [s.kind for s in sections] == [SectionKind.REFERENCES]

    def test_empty_group_raises(self):
        b = _mini_bundle("# Vision\n\nV.")
        with pytest.raises(EmptyGroup):
            make_context(b, SectionGroup.ETHICS)

    def test_administrative_kinds_belong_to_no_group(self, bundle):
        from grantprobe.corpus import ADMINISTRATIVE_KINDS, GROUP_MEMBERS

        for members in GROUP_MEMBERS.values():
            assert not set(members) & ADMINISTRATIVE_KINDS
            assert len(members) == len(set(members))


def _apply_unified(original: str, hunk_text: str) -> str:
    """Independent oracle: apply a unified diff to its original text."""
    lines = original.splitlines(keepends=True)
    out: list[str] = []
    idx = 0
    it = iter(hunk_text.splitlines(keepends=True))
    for line in it:
        if line.startswith(("--- ", "+++ ")):
            continue
        if line.startswith("@@"):
            header = line.split("@@")[1].strip()
            old = header.split(" ")[0]
            start = int(old.lstrip("-").split(",")[0])
            target = start - 1 if start > 0 else 0
            out.extend(lines[idx:target])
            idx = target
        elif line.startswith("-"):
            idx += 1
        elif line.startswith("+"):
            out.append(line[1:])
        elif line.startswith(" "):
            out.append(lines[idx])
            idx += 1
    out.extend(lines[idx:])
    return "".join(out)


class TestUnifiedDiff:
    def test_identical_bundles_give_empty_diff(self, bundle):
        assert unified_diff(bundle, bundle).is_empty

    def test_single_numeral_change_one_hunk_with_both_values(self):
        a = _mini_bundle("# Resources\n\nStaff: £8,000 for salaries.")
        b = _mini_bundle("# Resources\n\nStaff: £480 for salaries.")
        diff = unified_diff(a, b)
        assert len(diff.files) == 1
        assert "£8,000" in diff.text and "£480" in diff.text
        assert diff.text.count("@@") == 2  # one hunk

    def test_section_deletion_yields_removal_lines(self):
        a = _mini_bundle("# Vision\n\nV.\n\n# References\n\n1. r.")
        b = _mini_bundle("# Vision\n\nV.")
        diff = unified_diff(a, b)
        removed = [l for l in diff.text.splitlines() if l.startswith("-") and not l.startswith("---")]
        added = [l for l in diff.text.splitlines() if l.startswith("+") and not l.startswith("+++")]
        assert any("References" in l for l in removed)
        assert not added

    def test_deterministic(self, bundle):
        b2 = _mini_bundle("# Vision\n\nChanged.")
        a2 = _mini_bundle("# Vision\n\nOriginal.")
        assert unified_diff(a2, b2).text == unified_diff(a2, b2).text

    @given(
        st.lists(
            st.text(alphabet="abcdef \n.", min_size=1, max_size=60), min_size=1, max_size=4
        ),
        st.integers(min_value=0, max_value=3),
        st.text(alphabet="xyz .", min_size=0, max_size=30),
    )
    @settings(max_examples=60, deadline=None)
    def test_apply_diff_reproduces_variant(self, bodies, which, replacement):
        bodies = [b.replace("#", "") or "x" for b in bodies]
        sections = "\n\n".join(f"# Sec{i}\n\n{b}" for i, b in enumerate(bodies))
        a = _mini_bundle(sections)
        which = which % len(bodies)
        new_bodies = list(bodies)
        new_bodies[which] = replacement or "y"
        b = _mini_bundle("\n\n".join(f"# Sec{i}\n\n{x}" for i, x in enumerate(new_bodies)))
        diff = unified_diff(a, b)
        docs_a = serialize_bundle(a)
        docs_b = serialize_bundle(b)
        patched = dict(docs_a)
        for label, hunk in diff.files:
            patched[label] = _apply_unified(docs_a[label], hunk)
        assert patched == docs_b


class TestRoundTrip:
    def test_demo_bundle_round_trips(self, bundle):
        docs = serialize_bundle(bundle)
        reparsed = parse_proposal(
            docs,
            {"opportunity.md": "opportunity"},
            proposal_id=bundle.proposal_id,
        )
        assert [
            (s.kind, s.heading, s.body, s.ordinal) for s in reparsed.sections
        ] == [(s.kind, s.heading, s.body, s.ordinal) for s in bundle.sections]
        assert reparsed.gantt == bundle.gantt
        assert reparsed.budget == bundle.budget
        assert reparsed.opportunity == bundle.opportunity
