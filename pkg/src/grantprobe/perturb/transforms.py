"""Bundle-level application of transform kinds to their target scope."""
from __future__ import annotations

import math
import re
from dataclasses import replace

from ..corpus import BudgetTable, GanttTable, ProposalBundle, Section
from ..corpus.parse import is_budget_table, is_gantt_table, iter_tables
from ..corpus.serialize import serialize_budget, serialize_gantt
from ..errors import NotApplicable, TransformFailed
from . import textrules as tr
from .model import PerturbationSpec, TransformKind

# -- section text --------------------------------------------------------------


def _rules_for(spec: PerturbationSpec, seed: int) -> list[tr.Rule]:
    kind = spec.kind
    p = spec.params
    if kind == TransformKind.BRACKET_REMOVAL:
        return tr.BRACKET_REMOVAL_RULES
    if kind == TransformKind.BRACKET_AND_EXAMPLE_REMOVAL:
        return tr.BRACKET_AND_EXAMPLE_REMOVAL_RULES
    if kind == TransformKind.NUMERICAL_DEQUANTIFICATION:
        return tr.DEQUANTIFY_RULES
    if kind == TransformKind.EXISTING_WORK_FRAMING:
        return tr.EXISTING_WORK_FRAMING_RULES
    if kind == TransformKind.METHODOLOGICAL_REDUCTION:
        return tr.METHOD_REDUCTION_RULES
    if kind == TransformKind.CONNECTIVE_REMOVAL:
        return tr.CONNECTIVE_REMOVAL_RULES
    if kind == TransformKind.ACRONYM_UNEXPANSION:
        if p.get("mode") == "substitute":
            return tr.acronym_substitution_rules(seed)
        return tr.ACRONYM_UNEXPANSION_RULES
    if kind == TransformKind.NOVELTY_MARKER_REMOVAL:
        return tr.NOVELTY_MARKER_RULES
    if kind == TransformKind.FACTUAL_BACKGROUND_DELETION:
        return tr.FACTUAL_BACKGROUND_RULES
    if kind == TransformKind.COMPETENCY_EVIDENCE_REMOVAL:
        return tr.competency_removal_rules(p["target"])
    if kind == TransformKind.PERSONNEL_REPLACEMENT:
        return tr.personnel_rules(p["mode"])
    if kind == TransformKind.BUDGET_VARIANT:
        return tr.funding_text_rules(p["name"])
    if kind == TransformKind.COST_JUSTIFICATION_REMOVAL:
        return tr.COST_JUSTIFICATION_RULES
    if kind == TransformKind.IMPACT_SCOPE_SHIFT:
        return tr.impact_scope_rules(p["direction"])
    if kind == TransformKind.STAKEHOLDER_SWAP:
        return tr.STAKEHOLDER_SWAP_RULES
    if kind == TransformKind.OUTCOME_REMOVAL:
        return tr.outcome_removal_rules(p["horizon"])
    if kind == TransformKind.TIMELINESS_REMOVAL:
        return tr.TIMELINESS_REMOVAL_RULES
    raise KeyError(kind)


def _apply_section_rules(spec: PerturbationSpec, bundle: ProposalBundle, seed: int) -> ProposalBundle:
    targets = [s for s in bundle.sections if s.kind in spec.scope.section_kinds]
    if not targets:
        raise NotApplicable(f"no section in scope {spec.scope.describe()}")
    rules = _rules_for(spec, seed)
    changed = False
    result = bundle
    for section in targets:
        new_body = tr.apply_rules(section.body, rules)
        if new_body != section.body:
            result = result.replace_section(section.ordinal, new_body)
            changed = True
    if not changed:
        raise TransformFailed(f"{spec.id}: rules matched nothing in scope")
    return result


# -- budget table ---------------------------------------------------------------

#: Per-field fractions of full funding; org + components sum to 1, so every
#: variant keeps applied = full - org while full funding stays constant.
BUDGET_VARIANT_FRACTIONS: dict[str, dict[str, float]] = {
    "high_org_contribution": {
        "org": 0.84, "da_staff": 0.06, "da_estates": 0.02, "da_other": 0.01,
        "di_staff": 0.04, "di_equipment": 0.01, "di_travel": 0.01, "di_other": 0.01,
    },
    "low_equipment_high_other": {
        "org": 0.20, "da_staff": 0.32, "da_estates": 0.08, "da_other": 0.04,
        "di_staff": 0.20, "di_equipment": 0.004, "di_travel": 0.04, "di_other": 0.116,
    },
    "low_staff_cost": {
        "org": 0.20, "da_staff": 0.0192, "da_estates": 0.1808, "da_other": 0.08,
        "di_staff": 0.32, "di_equipment": 0.08, "di_travel": 0.06, "di_other": 0.06,
    },
    "no_org_contribution": {
        "org": 0.0, "da_staff": 0.40, "da_estates": 0.12, "da_other": 0.08,
        "di_staff": 0.24, "di_equipment": 0.08, "di_travel": 0.04, "di_other": 0.04,
    },
}

_COMPONENT_FIELDS = (
    "da_staff", "da_estates", "da_other",
    "di_staff", "di_equipment", "di_travel", "di_other",
)


def budget_variant_table(budget: BudgetTable, name: str) -> BudgetTable:
    fractions = BUDGET_VARIANT_FRACTIONS[name]
    full = budget.full_funding
    org = round(fractions["org"] * full)
    applied = full - org
    components = {f: round(fractions[f] * full) for f in _COMPONENT_FIELDS}
    residual = applied - sum(components.values())
    if residual:
        # absorb rounding drift into the largest component
        biggest = max(components, key=lambda f: components[f])
        components[biggest] += residual
    return BudgetTable(
        full_funding=full,
        org_contribution=org,
        applied=applied,
        fte_percent=budget.fte_percent,
        **components,
    )


def _locate_budget_section(bundle: ProposalBundle) -> tuple[Section, int, int]:
    for section in bundle.sections:
        for tb in iter_tables(section.body):
            if is_budget_table(tb):
                return section, tb.start, tb.end
    raise NotApplicable("no budget table")


def _apply_budget_table(spec: PerturbationSpec, bundle: ProposalBundle) -> ProposalBundle:
    if bundle.budget is None:
        raise NotApplicable("no budget")
    if spec.kind == TransformKind.FTE_CHANGE:
        new_budget = replace(bundle.budget, fte_percent=float(spec.params["target_percent"]))
    else:
        new_budget = budget_variant_table(bundle.budget, spec.params["name"])
    if new_budget == bundle.budget:
        raise TransformFailed(f"{spec.id}: budget already matches variant")
    section, start, end = _locate_budget_section(bundle)
    body = section.body[:start] + serialize_budget(new_budget) + section.body[end:]
    result = bundle.replace_section(section.ordinal, body)
    return replace(result, budget=new_budget)


# -- gantt ------------------------------------------------------------------------

_PERIOD_LABEL = re.compile(r"^([A-Za-z]*)(\d+)$")


def _extend_periods(periods: tuple[str, ...], new_count: int) -> tuple[str, ...]:
    if new_count <= len(periods):
        return periods[:new_count]
    extended = list(periods)
    m = _PERIOD_LABEL.match(periods[-1]) if periods else None
    prefix, last = (m.group(1), int(m.group(2))) if m else ("P", len(periods))
    for i in range(new_count - len(periods)):
        extended.append(f"{prefix}{last + i + 1}")
    return tuple(extended)


def _scale_gantt(gantt: GanttTable, factor: float) -> GanttTable:
    old_n = len(gantt.periods)
    new_n = max(1, math.ceil(old_n * factor))
    periods = _extend_periods(gantt.periods, new_n)
    tasks = []
    for label, cells in gantt.tasks:
        shaded = [i for i, c in enumerate(cells) if c]
        new_cells = [False] * new_n
        if shaded:
            start, end = shaded[0], shaded[-1]
            length = end - start + 1
            new_start = min(math.floor(start * factor), new_n - 1)
            new_len = max(1, math.ceil(length * factor) if factor >= 1 else round(length * factor) or 1)
            new_end = min(new_start + new_len - 1, new_n - 1)
            for i in range(new_start, new_end + 1):
                new_cells[i] = True
        tasks.append((label, tuple(new_cells)))
    return GanttTable(tasks=tuple(tasks), periods=periods, label_header=gantt.label_header)


def _rotate_gantt(gantt: GanttTable) -> GanttTable:
    rows = [cells for _, cells in gantt.tasks]
    labels = [label for label, _ in gantt.tasks]
    rotated = rows[1:] + rows[:1]
    return GanttTable(
        tasks=tuple(zip(labels, rotated)),
        periods=gantt.periods,
        label_header=gantt.label_header,
    )


def _locate_gantt_section(bundle: ProposalBundle) -> tuple[Section, int, int]:
    for section in bundle.sections:
        for tb in iter_tables(section.body):
            if is_gantt_table(tb):
                return section, tb.start, tb.end
    raise NotApplicable("no gantt table")


def _apply_gantt(spec: PerturbationSpec, bundle: ProposalBundle) -> ProposalBundle:
    if bundle.gantt is None:
        raise NotApplicable("no gantt")
    if spec.kind == TransformKind.TIMELINE_STRETCH:
        new_gantt = _scale_gantt(bundle.gantt, float(spec.params["factor"]))
    elif spec.kind == TransformKind.TIMELINE_COMPRESS:
        new_gantt = _scale_gantt(bundle.gantt, float(spec.params["factor"]))
    else:  # milestone shuffle
        new_gantt = _rotate_gantt(bundle.gantt)
    if new_gantt == bundle.gantt:
        raise TransformFailed(f"{spec.id}: timeline unchanged")
    section, start, end = _locate_gantt_section(bundle)
    body = section.body[:start] + serialize_gantt(new_gantt) + section.body[end:]
    result = bundle.replace_section(section.ordinal, body)
    return replace(result, gantt=new_gantt)


# -- opportunity -------------------------------------------------------------------

def _apply_opportunity(spec: PerturbationSpec, bundle: ProposalBundle) -> ProposalBundle:
    opp = bundle.opportunity
    if spec.kind == TransformKind.OPPORTUNITY_AIMS_EDIT:
        new_opp = replace(opp, aims=tr.aims_edit_text(opp.aims, spec.params["mode"]))
    elif spec.kind == TransformKind.LOOKING_FOR_SWAP:
        donor = tr.DONOR_LOOKING_FOR[spec.params["donor_call"]]
        if opp.looking_for == donor:
            raise TransformFailed(f"{spec.id}: looking_for already the donor text")
        new_opp = replace(opp, looking_for=donor)
    elif spec.kind == TransformKind.CROSS_CUTTING_THEME_INJECTION:
        new_opp = replace(
            opp, looking_for=tr.theme_injection_text(opp.looking_for, spec.params["theme"])
        )
    else:
        raise KeyError(spec.kind)
    return replace(bundle, opportunity=new_opp)


# -- dispatch -----------------------------------------------------------------------

def transform_bundle(spec: PerturbationSpec, bundle: ProposalBundle, seed: int) -> ProposalBundle:
    """Apply one spec to a bundle; deterministic for (spec, bundle, seed)."""
    if spec.scope.budget:
        return _apply_budget_table(spec, bundle)
    if spec.scope.gantt:
        return _apply_gantt(spec, bundle)
    if spec.scope.opportunity:
        return _apply_opportunity(spec, bundle)
    return _apply_section_rules(spec, bundle, seed)
