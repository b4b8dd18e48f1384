"""Built-in registry: 42 perturbations across the six quality axes.

The published axis summary names strategies rather than enumerating
instances, so this registry realises each strategy as concrete,
parameterised specs (five budget-table variants, two stretch factors, two
impact directions, and so on) totalling 42.  The export marks the set as a
reconstruction so downstream analyses can treat instance boundaries with
appropriate care.
"""
from __future__ import annotations

from typing import Any

from ..corpus import SectionKind
from .model import (
    BUDGET_SCOPE,
    GANTT_SCOPE,
    OPPORTUNITY_SCOPE,
    Axis,
    PerturbationSpec,
    TargetScope,
    TransformKind,
    sections_scope,
)

_VISION = sections_scope(SectionKind.VISION_AND_APPROACH)
_VISION_SUMMARY = sections_scope(SectionKind.VISION_AND_APPROACH, SectionKind.SUMMARY)
_TEAM = sections_scope(SectionKind.TEAM_CAPABILITY)
_CORE_TEAM = sections_scope(SectionKind.CORE_TEAM)
_COSTS = sections_scope(SectionKind.RESOURCES_AND_COSTS)

_AXIS_ORDER = {axis: i for i, axis in enumerate(Axis)}


def _spec(
    id: str,
    axis: Axis,
    kind: TransformKind,
    scope: TargetScope,
    description: str,
    **params: Any,
) -> PerturbationSpec:
    return PerturbationSpec(
        id=id, axis=axis, kind=kind, scope=scope,
        judge_description=description, params=params,
    )


_SPECS: tuple[PerturbationSpec, ...] = (
    # ---- funding (11) ----
    _spec(
        "funding.budget_high_org_contribution", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, BUDGET_SCOPE,
        "The summary budget table was altered so the organisation contributes "
        "almost the entire project cost itself: the organisational "
        "contribution was raised to 84% of full funding and the amount "
        "applied for collapsed accordingly, leaving token sums in every "
        "cost category.",
        name="high_org_contribution",
    ),
    _spec(
        "funding.budget_low_equipment_high_other", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, BUDGET_SCOPE,
        "In the summary budget table the directly incurred equipment line "
        "was cut to a token amount while the unexplained 'Other' directly "
        "incurred line was inflated to absorb the difference, misaligning "
        "spend with the project's stated equipment needs.",
        name="low_equipment_high_other",
    ),
    _spec(
        "funding.budget_low_staff_cost", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, BUDGET_SCOPE,
        "The directly allocated staff cost in the summary budget table was "
        "reduced to an implausibly small amount (about 2% of full funding) "
        "with the difference pushed into estates and other categories, so "
        "the staffing plan can no longer be delivered on the stated budget.",
        name="low_staff_cost",
    ),
    _spec(
        "funding.budget_no_org_contribution", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, BUDGET_SCOPE,
        "The organisational contribution in the summary budget table was "
        "zeroed so the full project cost is applied for, with cost "
        "categories re-spread to absorb the increase; the proposal text "
        "still describes institutional commitment.",
        name="no_org_contribution",
    ),
    _spec(
        "funding.fte_drop", Axis.FUNDING,
        TransformKind.FTE_CHANGE, BUDGET_SCOPE,
        "The staffing percentage in the summary budget table was changed to "
        "1% FTE while every staff cost stayed the same, so the named staff "
        "effort cannot deliver the workplan.",
        target_percent=1,
    ),
    _spec(
        "funding.text_excessive", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, _COSTS,
        "Itemised cost figures in the resources section were inflated to "
        "grossly excessive amounts (tens of thousands of pounds for minor "
        "items) without any matching change to the project scale.",
        name="excessive",
    ),
    _spec(
        "funding.text_no_values", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, _COSTS,
        "Numerical amounts were stripped from the itemised costs in the "
        "resources section, so budget lines request funding without any "
        "numerical specification.",
        name="no_values",
    ),
    _spec(
        "funding.text_vague", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, _COSTS,
        "The itemised cost breakdown in the resources section was replaced "
        "by a single vague funding request that names broad categories with "
        "no amounts, durations, or justification.",
        name="vague",
    ),
    _spec(
        "funding.line_addition", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, _COSTS,
        "An irrelevant cost line (office supplies for ergonomic seating) was "
        "added to the itemised costs in the resources section; it has no "
        "connection to the project activities.",
        name="line_addition",
    ),
    _spec(
        "funding.line_deletion", Axis.FUNDING,
        TransformKind.BUDGET_VARIANT, _COSTS,
        "A cost line covering a project activity that the narrative still "
        "relies on (conference travel) was deleted from the itemised costs "
        "in the resources section.",
        name="line_deletion",
    ),
    _spec(
        "funding.cost_justification_removal", Axis.FUNDING,
        TransformKind.COST_JUSTIFICATION_REMOVAL, _COSTS,
        "The justification phrases attached to itemised amounts in the "
        "resources section were removed, leaving bare figures with no "
        "explanation of what the money is for.",
    ),
    # ---- timeline (5) ----
    _spec(
        "timeline.stretch_moderate", Axis.TIMELINE,
        TransformKind.TIMELINE_STRETCH, GANTT_SCOPE,
        "Every activity in the project timeline table was stretched to one "
        "and a half times its planned duration, extending the project "
        "beyond the duration stated elsewhere in the proposal.",
        factor=1.5,
    ),
    _spec(
        "timeline.stretch_beyond_call", Axis.TIMELINE,
        TransformKind.TIMELINE_STRETCH, GANTT_SCOPE,
        "The project timeline table was stretched to double its length, "
        "taking the schedule past the maximum duration permitted by the "
        "funding call.",
        factor=2.0,
    ),
    _spec(
        "timeline.compress_halved", Axis.TIMELINE,
        TransformKind.TIMELINE_COMPRESS, GANTT_SCOPE,
        "All activities in the project timeline table were compressed into "
        "half the original duration, an unrealistic schedule for the "
        "described work.",
        factor=0.5,
    ),
    _spec(
        "timeline.compress_quarter", Axis.TIMELINE,
        TransformKind.TIMELINE_COMPRESS, GANTT_SCOPE,
        "All activities in the project timeline table were compressed into a "
        "quarter of the original duration, leaving far too little time for "
        "any workpackage.",
        factor=0.25,
    ),
    _spec(
        "timeline.milestone_rotation", Axis.TIMELINE,
        TransformKind.MILESTONE_SHUFFLE, GANTT_SCOPE,
        "The scheduling bars in the project timeline table were rotated "
        "between workpackages, so activities no longer follow their logical "
        "order (for example evaluation is scheduled before the system it "
        "evaluates is built).",
    ),
    # ---- competency (5) ----
    _spec(
        "competency.skills_evidence_removal", Axis.COMPETENCY,
        TransformKind.COMPETENCY_EVIDENCE_REMOVAL, _TEAM,
        "The sentence evidencing the team's core technical expertise was "
        "removed from the team capability section, so a skill the project "
        "depends on is no longer demonstrated.",
        target="skills",
    ),
    _spec(
        "competency.track_record_removal", Axis.COMPETENCY,
        TransformKind.COMPETENCY_EVIDENCE_REMOVAL, _TEAM,
        "Evidence of the team's track record (publications and delivered "
        "projects) was removed from the team capability section.",
        target="track_record",
    ),
    _spec(
        "competency.leadership_removal", Axis.COMPETENCY,
        TransformKind.COMPETENCY_EVIDENCE_REMOVAL, _TEAM,
        "Evidence of leadership and project-management experience was "
        "removed from the team capability section.",
        target="leadership",
    ),
    _spec(
        "competency.personnel_removal", Axis.COMPETENCY,
        TransformKind.PERSONNEL_REPLACEMENT, _CORE_TEAM,
        "A named member of the core team was removed entirely, although the "
        "workplan still assigns activities to that role.",
        mode="remove",
    ),
    _spec(
        "competency.personnel_replacement", Axis.COMPETENCY,
        TransformKind.PERSONNEL_REPLACEMENT, _CORE_TEAM,
        "A key named investigator in the core team was replaced by a person "
        "whose stated background is in an unrelated discipline and who "
        "lacks the expertise the role requires.",
        mode="replace",
    ),
    # ---- alignment (5) ----
    _spec(
        "alignment.aims_narrowed", Axis.ALIGNMENT,
        TransformKind.OPPORTUNITY_AIMS_EDIT, OPPORTUNITY_SCOPE,
        "The aims of the funding opportunity document were edited to add a "
        "narrow eligibility mandate (hardware demonstrated at high "
        "technology readiness) that the proposal does not satisfy.",
        mode="narrow",
    ),
    _spec(
        "alignment.aims_broadened", Axis.ALIGNMENT,
        TransformKind.OPPORTUNITY_AIMS_EDIT, OPPORTUNITY_SCOPE,
        "The aims of the funding opportunity document were edited to "
        "prioritise unrelated disciplines (creative and cultural "
        "industries), weakening the proposal's strategic fit to the call.",
        mode="broaden",
    ),
    _spec(
        "alignment.looking_for_swap", Axis.ALIGNMENT,
        TransformKind.LOOKING_FOR_SWAP, OPPORTUNITY_SCOPE,
        "The 'What we're looking for' section of the funding opportunity "
        "was swapped with the equivalent section from a different call "
        "about certified assistive robotics for residential care, so the "
        "proposal no longer matches what the call asks for.",
        donor_call="assistive-robotics-call",
    ),
    _spec(
        "alignment.theme_net_zero", Axis.ALIGNMENT,
        TransformKind.CROSS_CUTTING_THEME_INJECTION, OPPORTUNITY_SCOPE,
        "A cross-cutting mandate was injected into the funding "
        "opportunity's 'What we're looking for' section requiring every "
        "proposal to make a substantive costed contribution to net zero "
        "and environmental sustainability, which the proposal does not "
        "address.",
        theme="net zero and environmental sustainability",
    ),
    _spec(
        "alignment.theme_quantum", Axis.ALIGNMENT,
        TransformKind.CROSS_CUTTING_THEME_INJECTION, OPPORTUNITY_SCOPE,
        "A cross-cutting mandate was injected into the funding "
        "opportunity's 'What we're looking for' section requiring a "
        "substantive costed contribution to quantum technologies, which "
        "the proposal does not address.",
        theme="quantum technologies",
    ),
    # ---- clarity (10) ----
    _spec(
        "clarity.bracket_removal", Axis.CLARITY,
        TransformKind.BRACKET_REMOVAL, _VISION,
        "Parenthesised examples and illustrations (phrases beginning 'such "
        "as' or 'including') were deleted from the vision and approach "
        "narrative, leaving general claims without their concrete examples.",
    ),
    _spec(
        "clarity.bracket_and_example_removal", Axis.CLARITY,
        TransformKind.BRACKET_AND_EXAMPLE_REMOVAL, _VISION,
        "Parenthesised examples were deleted from the vision and approach "
        "narrative together with the remainder of each affected sentence, "
        "so the claims lose both their examples and their stated purpose.",
    ),
    _spec(
        "clarity.numerical_dequantification", Axis.CLARITY,
        TransformKind.NUMERICAL_DEQUANTIFICATION, _VISION,
        "Specific numbers in the vision and approach narrative were "
        "replaced with vague quantifiers ('many', 'several', 'a few', "
        "'high'), removing the quantitative evidence behind the claims.",
    ),
    _spec(
        "clarity.existing_work_framing", Axis.CLARITY,
        TransformKind.EXISTING_WORK_FRAMING, _VISION,
        "Sentences announcing new contributions in the vision and approach "
        "narrative were reworded as descriptions of already-existing work, "
        "removing the framing that marks the project's own contribution.",
    ),
    _spec(
        "clarity.methodological_reduction", Axis.CLARITY,
        TransformKind.METHODOLOGICAL_REDUCTION, _VISION,
        "The clauses explaining how the work will be done (methods "
        "introduced by 'using', 'by utilizing', 'via') were deleted from "
        "the vision and approach narrative, leaving unexplained claims.",
    ),
    _spec(
        "clarity.connective_removal", Axis.CLARITY,
        TransformKind.CONNECTIVE_REMOVAL, _VISION,
        "Connective phrases that link sentences into an argument ('To "
        "bridge the gap,', 'In light of these findings,') were removed "
        "from the vision and approach narrative, disrupting its logical "
        "flow.",
    ),
    _spec(
        "clarity.acronym_unexpansion", Axis.CLARITY,
        TransformKind.ACRONYM_UNEXPANSION, _VISION,
        "The expansions that define acronyms at first use were deleted "
        "from the vision and approach narrative, leaving bare acronyms "
        "that are never explained.",
        mode="delete_expansion",
    ),
    _spec(
        "clarity.acronym_substitution", Axis.CLARITY,
        TransformKind.ACRONYM_UNEXPANSION, _VISION,
        "Acronyms in the vision and approach narrative were replaced with "
        "random letter codes that are never defined anywhere in the "
        "document.",
        mode="substitute",
    ),
    _spec(
        "clarity.novelty_marker_removal", Axis.CLARITY,
        TransformKind.NOVELTY_MARKER_REMOVAL, _VISION,
        "Words marking novelty ('novel', 'first', 'state-of-the-art') were "
        "removed from the vision and approach narrative, so the "
        "contribution is no longer positioned against prior work.",
    ),
    _spec(
        "clarity.factual_background_deletion", Axis.CLARITY,
        TransformKind.FACTUAL_BACKGROUND_DELETION, _VISION,
        "Sentences giving cited factual background and motivating evidence "
        "were deleted from the vision and approach narrative, leaving "
        "claims without supporting context.",
    ),
    # ---- impact (6) ----
    _spec(
        "impact.scope_shift_short", Axis.IMPACT,
        TransformKind.IMPACT_SCOPE_SHIFT, _VISION_SUMMARY,
        "Impact statements were weakened to trivial short-term claims: "
        "strong outcome verbs and magnitudes were replaced with minimal "
        "ones (for example 'significant boost' became 'minor refinement').",
        direction="short",
    ),
    _spec(
        "impact.scope_shift_long", Axis.IMPACT,
        TransformKind.IMPACT_SCOPE_SHIFT, _VISION_SUMMARY,
        "Impact statements were inflated into grandiose long-term claims "
        "unsupported by the workplan (for example 'significant boost' "
        "became 'fundamental shift').",
        direction="long",
    ),
    _spec(
        "impact.outcome_removal_short", Axis.IMPACT,
        TransformKind.OUTCOME_REMOVAL, _VISION_SUMMARY,
        "Sentences describing the project's short-term outcomes and "
        "immediate deliverables were deleted from the narrative.",
        horizon="short",
    ),
    _spec(
        "impact.outcome_removal_long", Axis.IMPACT,
        TransformKind.OUTCOME_REMOVAL, _VISION_SUMMARY,
        "Sentences describing the project's long-term outcomes and lasting "
        "legacy were deleted from the narrative.",
        horizon="long",
    ),
    _spec(
        "impact.stakeholder_swap", Axis.IMPACT,
        TransformKind.STAKEHOLDER_SWAP, _VISION_SUMMARY,
        "The stakeholders and beneficiaries named in the impact statements "
        "were replaced with irrelevant parties who would gain nothing from "
        "the project's outputs.",
    ),
    _spec(
        "impact.timeliness_removal", Axis.IMPACT,
        TransformKind.TIMELINESS_REMOVAL, _VISION_SUMMARY,
        "Sentences establishing why the work matters now (urgency, "
        "environmental benefit, current demand) were deleted from the "
        "impact statements.",
    ),
)


def registry() -> list[PerturbationSpec]:
    """The 42 built-in specs in stable (axis, id) order."""
    return sorted(_SPECS, key=lambda s: (_AXIS_ORDER[s.axis], s.id))


def spec_by_id(spec_id: str) -> PerturbationSpec:
    for spec in _SPECS:
        if spec.id == spec_id:
            return spec
    raise KeyError(spec_id)


def registry_records() -> list[dict[str, Any]]:
    """One exportable record per spec."""
    return [
        {
            "id": s.id,
            "axis": s.axis.value,
            "kind": s.kind.value,
            "params": dict(s.params),
            "scope": s.scope.describe(),
            "judge_description": s.judge_description,
            "reconstruction": True,
        }
        for s in registry()
    ]
