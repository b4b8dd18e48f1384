"""The three review architectures: baseline, section-level, council."""
from __future__ import annotations

import random
from typing import Optional

from ..corpus import ProposalBundle, SectionGroup, make_context
from ..errors import AllGroupsEmpty, EmptyGroup, RankingParseFailed, ScoreOutOfRange
from ..modelgw import ChatRequest, EndpointConfig, Gateway, chat_structured, fan_out
from . import prompts
from .ranking import aggregate_partial_rankings, parse_final_ranking
from .records import (
    CouncilTrace,
    GroupReview,
    LedgerTotals,
    MetaReview,
    PersonaReview,
    ReviewRecord,
    ReviewSystem,
)

PERSONA_ORDER = (
    "cost_analyst",
    "ethics_assessor",
    "tech_evangelist",
    "methodological_sceptic",
    "impact_champion",
)

GROUP_ORDER = (
    SectionGroup.VISION_APPROACH,
    SectionGroup.TEAM_CAPABILITY,
    SectionGroup.FUNDING_RESOURCES,
    SectionGroup.ETHICS,
)

_RANKING_REPROMPT = """

Your previous response did not end with a valid ranking block. Respond again.

IMPORTANT: Your final ranking MUST be formatted EXACTLY as follows:
- Start with the line "FINAL RANKING:" (all caps, with colon)
- Then list the reviews from best to worst as a numbered list
- Each line should be: number, period, space, then ONLY the review label (e.g., "1. Review A")
- Do not add any other text or explanations in the ranking section"""


def _score_from(obj: dict) -> int:
    score = obj.get("score")
    if isinstance(score, float) and score.is_integer():
        score = int(score)
    if not isinstance(score, int) or isinstance(score, bool) or not 1 <= score <= 6:
        raise ScoreOutOfRange(f"score must be an integer in [1, 6], got {score!r}")
    return score


def _round_half_up_mean(scores: list[int]) -> int:
    total, n = sum(scores), len(scores)
    return (2 * total + n) // (2 * n)


def run_baseline(
    bundle: ProposalBundle,
    gateway: Gateway,
    endpoint: EndpointConfig,
    effort: str = "high",
    run_index: int = 0,
    target: Optional[str] = None,
    seed: Optional[int] = None,
) -> ReviewRecord:
    """Single-pass review of the complete proposal narrative."""
    user_text = prompts.baseline_prompt(bundle)
    req = ChatRequest(
        system_text=prompts.REVIEWER_SYSTEM_TEXT,
        user_text=user_text,
        effort=effort,
        want_structured=True,
        seed=seed,
    )
    obj, result = chat_structured(
        gateway, endpoint, req, ("score", "explanation"), stage="review/baseline"
    )
    ledger = LedgerTotals().plus(result.prompt_tokens, result.completion_tokens, result.wall_ms)
    return ReviewRecord(
        system=ReviewSystem.BASELINE,
        target=target or bundle.proposal_id,
        run_index=run_index,
        effort=effort,
        score=_score_from(obj),
        explanation=str(obj["explanation"]),
        ledger=ledger,
        prompts=(
            {"stage": "baseline", "system": req.system_text, "user": user_text},
        ),
    )


def run_section_level(
    bundle: ProposalBundle,
    gateway: Gateway,
    endpoint: EndpointConfig,
    effort: str = "high",
    run_index: int = 0,
    target: Optional[str] = None,
    seed: Optional[int] = None,
) -> ReviewRecord:
    """One call per section group; overall score is the half-up rounded mean."""
    group_reviews: list[GroupReview] = []
    ledger = LedgerTotals()
    audit: list[dict[str, str]] = []
    for group in GROUP_ORDER:
        try:
            sections = make_context(bundle, group)
        except EmptyGroup:
            continue
        user_text = prompts.baseline_prompt(bundle, sections)
        req = ChatRequest(
            system_text=prompts.REVIEWER_SYSTEM_TEXT,
            user_text=user_text,
            effort=effort,
            want_structured=True,
            seed=seed,
        )
        obj, result = chat_structured(
            gateway, endpoint, req, ("score", "explanation"), stage="review/section"
        )
        ledger = ledger.plus(result.prompt_tokens, result.completion_tokens, result.wall_ms)
        group_reviews.append(
            GroupReview(group=group, score=_score_from(obj), explanation=str(obj["explanation"]))
        )
        audit.append({"stage": f"group/{group.value}", "system": req.system_text, "user": user_text})
    if not group_reviews:
        raise AllGroupsEmpty("no reviewable section group present")
    overall = _round_half_up_mean([g.score for g in group_reviews])
    explanation = "\n\n".join(
        f"## {g.group.value}\n\n{g.explanation}" for g in group_reviews
    )
    return ReviewRecord(
        system=ReviewSystem.SECTION_LEVEL,
        target=target or bundle.proposal_id,
        run_index=run_index,
        effort=effort,
        score=overall,
        explanation=explanation,
        group_reviews=tuple(group_reviews),
        ledger=ledger,
        prompts=tuple(audit),
    )


def _persona_summary(bundle: ProposalBundle) -> str:
    for section in bundle.sections:
        if section.kind.value == "summary":
            return section.body
    narrative = " ".join(s.body for s in bundle.sections)
    return narrative[:600]


def run_council(
    bundle: ProposalBundle,
    gateway: Gateway,
    endpoint: EndpointConfig,
    effort: str = "high",
    seed: int = 0,
    run_index: int = 0,
    target: Optional[str] = None,
    max_workers: int = 1,
) -> ReviewRecord:
    """Three-stage council: persona reviews, blind peer ranking, chair synthesis."""
    target_id = target or bundle.proposal_id
    base_prompt = prompts.baseline_prompt(bundle)
    ledger = LedgerTotals()
    audit: list[dict[str, str]] = []

    # stage 1: five independent persona reviews
    def review_one(persona: str):
        user_text = base_prompt
        req = ChatRequest(
            system_text=prompts.PERSONA_PROFILES[persona],
            user_text=user_text,
            effort=effort,
            want_structured=True,
            seed=seed,
        )
        return persona, req, chat_structured(
            gateway, endpoint, req, ("score", "explanation"), stage="review/council/persona"
        )

    persona_reviews: list[PersonaReview] = []
    for persona, req, (obj, result) in fan_out(
        [lambda p=p: review_one(p) for p in PERSONA_ORDER], max_workers
    ):
        ledger = ledger.plus(result.prompt_tokens, result.completion_tokens, result.wall_ms)
        persona_reviews.append(
            PersonaReview(persona=persona, score=_score_from(obj), explanation=str(obj["explanation"]))
        )
        audit.append({"stage": f"persona/{persona}", "system": req.system_text, "user": req.user_text})

    by_persona = {p.persona: p for p in persona_reviews}
    summary = _persona_summary(bundle)

    # stage 2: each persona blind-ranks the other four
    def meta_one(reviewer: str):
        others = [p for p in PERSONA_ORDER if p != reviewer]
        rng = random.Random(f"{seed}:{target_id}:{reviewer}")
        shuffled = list(others)
        rng.shuffle(shuffled)
        labels = [chr(ord("A") + i) for i in range(len(shuffled))]
        label_map = dict(zip(labels, shuffled))
        review_texts = "\n\n".join(
            f"### Review {lab}\n\nScore: {by_persona[p].score}/6\n\n{by_persona[p].explanation}"
            for lab, p in zip(labels, shuffled)
        )
        user_text = prompts.META_REVIEW_TEMPLATE.format(
            proposal_summary=summary, review_texts=review_texts
        )
        req = ChatRequest(
            system_text=prompts.PERSONA_PROFILES[reviewer],
            user_text=user_text,
            effort=effort,
            seed=seed,
        )
        result = gateway.chat(endpoint, req, stage="review/council/meta")
        calls = [(req, result)]
        try:
            ranking = parse_final_ranking(result.text, labels)
        except RankingParseFailed:
            repair = ChatRequest(
                system_text=req.system_text,
                user_text=user_text + _RANKING_REPROMPT,
                effort=effort,
                seed=seed,
            )
            result = gateway.chat(endpoint, repair, stage="review/council/meta")
            calls.append((repair, result))
            ranking = parse_final_ranking(result.text, labels)
        return reviewer, user_text, result.text, ranking, label_map, calls

    meta_reviews: list[MetaReview] = []
    deanonymized: list[list[str]] = []
    for reviewer, user_text, text, ranking, label_map, calls in fan_out(
        [lambda r=r: meta_one(r) for r in PERSONA_ORDER], max_workers
    ):
        for req, result in calls:
            ledger = ledger.plus(result.prompt_tokens, result.completion_tokens, result.wall_ms)
        meta_reviews.append(
            MetaReview(persona=reviewer, text=text, ranking=tuple(ranking), label_map=label_map)
        )
        deanonymized.append([label_map[lab] for lab in ranking])
        audit.append({"stage": f"meta/{reviewer}", "system": prompts.PERSONA_PROFILES[reviewer], "user": user_text})

    aggregate_order = aggregate_partial_rankings(deanonymized)

    # stage 3: chair synthesis over everything
    individual = "\n\n".join(
        f"### {p.persona}\n\nScore: {p.score}/6\n\n{p.explanation}" for p in persona_reviews
    )
    metas = "\n\n".join(f"### {m.persona} meta-review\n\n{m.text}" for m in meta_reviews)
    aggregation = "\n".join(f"{i + 1}. {p}" for i, p in enumerate(aggregate_order))
    chair_user = prompts.CHAIR_TEMPLATE.format(
        individual_reviews=individual, meta_reviews=metas, aggregation=aggregation
    )
    chair_req = ChatRequest(
        system_text=prompts.CHAIR_PROFILE,
        user_text=chair_user,
        effort=effort,
        want_structured=True,
        seed=seed,
    )
    obj, result = chat_structured(
        gateway, endpoint, chair_req, ("score", "explanation"), stage="review/council/chair"
    )
    ledger = ledger.plus(result.prompt_tokens, result.completion_tokens, result.wall_ms)
    audit.append({"stage": "chair", "system": chair_req.system_text, "user": chair_user})
    chair_score = _score_from(obj)
    chair_explanation = str(obj["explanation"])

    trace = CouncilTrace(
        persona_reviews=tuple(persona_reviews),
        meta_reviews=tuple(meta_reviews),
        aggregate_order=tuple(aggregate_order),
        chair_score=chair_score,
        chair_explanation=chair_explanation,
    )
    return ReviewRecord(
        system=ReviewSystem.COUNCIL,
        target=target_id,
        run_index=run_index,
        effort=effort,
        score=chair_score,
        explanation=chair_explanation,
        council=trace,
        ledger=ledger,
        prompts=tuple(audit),
    )


def run_review(
    system: ReviewSystem,
    bundle: ProposalBundle,
    gateway: Gateway,
    endpoint: EndpointConfig,
    effort: str = "high",
    seed: int = 0,
    run_index: int = 0,
    target: Optional[str] = None,
    max_workers: int = 1,
) -> ReviewRecord:
    if system is ReviewSystem.BASELINE:
        return run_baseline(bundle, gateway, endpoint, effort, run_index, target, seed)
    if system is ReviewSystem.SECTION_LEVEL:
        return run_section_level(bundle, gateway, endpoint, effort, run_index, target, seed)
    return run_council(
        bundle, gateway, endpoint, effort, seed, run_index, target, max_workers
    )
