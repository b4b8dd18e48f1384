"""Three-judge perturbation-identification panel with majority voting."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from ..errors import EmptyInput, VerdictParseFailed, WrongPanelSize
from ..modelgw import ChatRequest, EndpointConfig, Gateway, chat_structured, fan_out

JUDGE_SYSTEM_TEXT = """\
You are an expert evaluator assessing whether an LLM-generated grant proposal review correctly identifies a known perturbation (intentional flaw) that was introduced into the proposal.

You will be given:
1. A description of the perturbation that was applied
2. The exact diff showing what changed between the original and perturbed proposal
3. The LLM-generated review of the perturbed proposal

Your task is to determine whether the review identifies the perturbation or a direct consequence of it."""

JUDGE_USER_TEMPLATE = """\
You are evaluating whether a reviewer identified an introduced error in a funding proposal.

## Context

A genuine EPSRC proposal was adversarially modified with the following perturbation:
{perturbation_description}

## File Changes

{diff}

## Review Text
{review_text}

## Task
Evaluate whether the review identifies the perturbation. Consider:
- Does the review explicitly mention the specific issue introduced?
- Does the review identify a direct, obvious consequence of the perturbation?
- Vague or generic criticisms that could apply to any proposal do NOT count

Award exactly one label:
- C (Correct): Review explicitly identifies and discusses the introduced error or direct consequences
- P (Partial): Review makes vague or incomplete reference to issues from the perturbation
- I (Incorrect): Review fails to acknowledge the error or only mentions it tangentially

Respond with a JSON with two string fields: explanation and verdict."""


class Verdict(str, enum.Enum):
    C = "C"  # Correct
    P = "P"  # Partial
    I = "I"  # Incorrect


_VERDICT_ALIASES = {
    "c": Verdict.C, "correct": Verdict.C,
    "p": Verdict.P, "partial": Verdict.P,
    "i": Verdict.I, "incorrect": Verdict.I,
}


def normalize_verdict(token: str) -> Verdict:
    verdict = _VERDICT_ALIASES.get(token.strip().lower())
    if verdict is None:
        raise VerdictParseFailed(f"unknown verdict token {token!r}")
    return verdict


def detection_value(v: Verdict) -> float:
    return {Verdict.C: 1.0, Verdict.P: 0.5, Verdict.I: 0.0}[v]


@dataclass(frozen=True)
class JudgeVerdict:
    judge_id: str
    verdict: Verdict
    explanation: str

    def __post_init__(self) -> None:
        if not self.explanation.strip():
            raise ValueError("judge explanation must be non-empty")


@dataclass(frozen=True)
class PanelVerdict:
    pair_id: str  # review x perturbation
    verdicts: tuple[JudgeVerdict, JudgeVerdict, JudgeVerdict]
    majority: Verdict
    detection_score: float
    tie_broken: bool = False  # set when a three-way split resolved to P


def build_judge_prompt(description: str, diff: str, review_text: str) -> ChatRequest:
    """The judge template with its three slots filled; all slots required."""
    for name, value in (("description", description), ("diff", diff), ("review_text", review_text)):
        if not value.strip():
            raise EmptyInput(name)
    return ChatRequest(
        system_text=JUDGE_SYSTEM_TEXT,
        user_text=JUDGE_USER_TEMPLATE.format(
            perturbation_description=description, diff=diff, review_text=review_text
        ),
        want_structured=True,
    )


def judge_once(
    gateway: Gateway,
    endpoint: EndpointConfig,
    prompt: ChatRequest,
    seed: Optional[int] = None,
) -> JudgeVerdict:
    """One judge's verdict; the structured-output path already includes one
    reprompt on parse failure."""
    req = ChatRequest(
        system_text=prompt.system_text,
        user_text=prompt.user_text,
        effort=prompt.effort,
        want_structured=True,
        seed=seed,
    )
    obj, _ = chat_structured(gateway, endpoint, req, ("explanation", "verdict"), stage="judge")
    return JudgeVerdict(
        judge_id=endpoint.model,
        verdict=normalize_verdict(str(obj["verdict"])),
        explanation=str(obj["explanation"]) or "(no reasoning returned)",
    )


def panel_majority(pair_id: str, verdicts: Sequence[JudgeVerdict]) -> PanelVerdict:
    """Strict majority of exactly three verdicts; a three-way split resolves
    to P, the risk-neutral midpoint, and is flagged."""
    if len(verdicts) != 3:
        raise WrongPanelSize(f"panel needs exactly 3 verdicts, got {len(verdicts)}")
    counts = Counter(v.verdict for v in verdicts)
    top, top_count = counts.most_common(1)[0]
    tie_broken = False
    if top_count == 1:  # (C, P, I) split
        top = Verdict.P
        tie_broken = True
    return PanelVerdict(
        pair_id=pair_id,
        verdicts=(verdicts[0], verdicts[1], verdicts[2]),
        majority=top,
        detection_score=detection_value(top),
        tie_broken=tie_broken,
    )


def judge_pair(
    gateway: Gateway,
    judge_endpoints: Sequence[EndpointConfig],
    pair_id: str,
    description: str,
    diff: str,
    review_text: str,
    seed: Optional[int] = None,
    max_workers: int = 1,
) -> PanelVerdict:
    """Run the three judges over one (review, perturbation) pair."""
    if len(judge_endpoints) != 3:
        raise WrongPanelSize(f"panel needs exactly 3 judges, got {len(judge_endpoints)}")
    prompt = build_judge_prompt(description, diff, review_text)
    verdicts = fan_out(
        [lambda ep=ep: judge_once(gateway, ep, prompt, seed) for ep in judge_endpoints],
        max_workers,
    )
    return panel_majority(pair_id, verdicts)
