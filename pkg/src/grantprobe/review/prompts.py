"""Prompt templates for the three review architectures.

The persona profiles and the three council stage templates are fixed
contract text; reviews are only comparable across runs if these strings
never drift, so edit with care.
"""
from __future__ import annotations

from ..corpus import ProposalBundle, Section

SCORE_SCALE = """\
6 - Exceptional: The application is outstanding. It addresses all of the assessment criteria and meets them to an exceptional level.
5 - Excellent: The application is very high quality. It addresses most of the assessment criteria and meets them to an excellent level. There are very minor weaknesses.
4 - Very good: The application demonstrates considerable quality. It meets most of the assessment criteria to a high level. There are minor weaknesses.
3 - Good: The application is of good quality. It meets most of the assessment criteria to an acceptable level, but not across all aspects of the proposed activities. There are weaknesses.
2 - Weak: The application is not sufficiently competitive. It meets some of the assessment criteria to an adequate level. There are, however, significant weaknesses.
1 - Poor: The application is flawed or unsuitable quality for funding. It does not meet the assessment criteria to an adequate level."""

BASELINE_TEMPLATE = """\
For the provided grant proposal, give a score between 1 and 6 accompanied by a detailed justification for your score.

## Score Descriptions

{score_scale}

## Review Criteria

We'll only be able to use your review if it meets the following criteria:

- you've included enough information to help UKRI staff and panellists make an informed judgement on the application
- your comments are only based on information that's included in the application
- you have not reviewed the application negatively because of any equality, diversity and inclusion requirements (for example, decisions to work part-time or past absences for health reasons)
- your comments are not speculative, inflammatory or damaging to applicants
- you have not used journal metrics, conference rankings or personal metrics as a substitute measure for assessing the applicants' contributions
- you do not have a conflict of interest with the application and have not revealed your identity

{proposal_content}

Provide your final assessment as a JSON object with "score" (integer 1-6) and "explanation" (string) fields."""

META_REVIEW_TEMPLATE = """\
You are evaluating different reviews of the same grant proposal.

## Summary

{proposal_summary}

## Reviews

{review_texts}

Your task:
1. First, evaluate each review individually. For each review, explain what it does well and what weaknesses it has in its assessment.
2. Then, at the very end of your response, provide a final ranking.

IMPORTANT: Your final ranking MUST be formatted EXACTLY as follows:
- Start with the line "FINAL RANKING:" (all caps, with colon)
- Then list the reviews from best to worst as a numbered list
- Each line should be: number, period, space, then ONLY the review label (e.g., "1. Review A")
- Do not add any other text or explanations in the ranking section

Example format:
Review A provides comprehensive coverage but...
Review B is overly critical on...

FINAL RANKING:
1. Review C
2. Review A
3. Review B

Now provide your evaluation and ranking:"""

CHAIR_TEMPLATE = """\
Multiple expert reviewers have provided reviews and then ranked each other's assessments. Your task as Chairman is to synthesize all of this information into a single score (1-6) and explanation. Consider:

- The individual reviews and their insights
- The peer rankings and what they reveal about review quality
- Any patterns of agreement or disagreement
- The aggregate rankings showing which perspectives were most valued

## Stage 1 - Individual Reviews

{individual_reviews}

## Stage 2 - Peer Rankings

{meta_reviews}

## Aggregate Rankings (Best to Worst)

{aggregation}

Provide your final assessment as a JSON object with "score" (integer 1-6) and "explanation" (string) fields."""

PERSONA_PROFILES: dict[str, str] = {
    "cost_analyst": """\
You are financially minded: someone who pays particular attention to value for money, resource allocation, and cost-effectiveness. While you must still provide a comprehensive review covering all aspects, you are especially critical of:

- Budget justification and whether costs are reasonable and necessary
- Efficient use of resources and personnel
- Whether the proposed outcomes justify the investment
- Risk of cost overruns or inefficient spending
- Whether similar outcomes could be achieved with fewer resources""",
    "ethics_assessor": """\
You are ethically minded: someone who emphasizes responsible research practices and societal implications. While you must still provide a comprehensive review covering all aspects, you are especially attentive to:

- Research ethics and responsible innovation
- Data privacy, security, and governance considerations
- Potential societal impacts, both positive and negative
- Inclusivity and equitable access to research benefits
- Environmental sustainability and long-term consequences""",
    "tech_evangelist": """\
You are a tech evangelist: you value innovation, cutting-edge approaches, and technological advancement. While you must still provide a comprehensive review covering all aspects, you are especially excited by:

- Novel technologies and innovative methodologies
- Potential for breakthrough discoveries or transformative applications
- Technical sophistication and ambition
- Integration of emerging technologies
- Opportunities to push boundaries and challenge conventions""",
    "methodological_sceptic": """\
You are a methodological skeptic who scrutinizes research design and scientific rigor. While you must still provide a comprehensive review covering all aspects, you are especially critical of:

- Methodological soundness and appropriateness
- Validity of proposed approaches and assumptions
- Adequacy of controls, validation strategies, and error analysis
- Whether claims are supported by the proposed methods
- Potential confounds, biases, or limitations in the research design""",
    "impact_champion": """\
You are an impact champion who focuses on real-world applications and broader benefits. While you must still provide a comprehensive review covering all aspects, you are especially interested in:

- Pathways to impact and how outcomes will be translated
- Engagement with stakeholders, industry, or end-users
- Potential for economic, social, or cultural benefits
- Plans for dissemination and knowledge exchange
- Long-term sustainability and scalability of impacts""",
}

CHAIR_PROFILE = """\
You are a synthesizer who excels at integrating diverse expert opinions. You are particularly attuned to:

- When disagreement reflects genuine trade-offs versus differences in evidence quality
- The credibility and rigor behind different viewpoints, not just their conviction
- Patterns that emerge across independent assessments
- When a minority position raises valid concerns that consensus overlooks
- Proportional weighting - giving appropriate influence to well-reasoned arguments
- Distinguishing between complementary perspectives and genuine contradictions"""

REVIEWER_SYSTEM_TEXT = (
    "You are an expert reviewer for a UK research funding council, assessing "
    "a grant proposal against the official guidance."
)


def render_proposal_content(bundle: ProposalBundle, sections: list[Section] | None = None) -> str:
    """Guidelines + opportunity + narrative as a single review context.

    ``sections`` restricts the narrative (used by the section-level system);
    by default the complete proposal narrative is included.
    """
    opp = bundle.opportunity
    chosen = bundle.sections if sections is None else sections
    narrative = "\n\n".join(f"## {s.heading}\n\n{s.body}" for s in chosen)
    return (
        f"# Review Guidelines\n\n{opp.guidelines}\n\n"
        f"# Funding Opportunity: {opp.call_id}\n\n"
        f"## Aims\n\n{opp.aims}\n\n"
        f"## What we're looking for\n\n{opp.looking_for}\n\n"
        f"# Proposal\n\n{narrative}"
    )


def baseline_prompt(bundle: ProposalBundle, sections: list[Section] | None = None) -> str:
    return BASELINE_TEMPLATE.format(
        score_scale=SCORE_SCALE,
        proposal_content=render_proposal_content(bundle, sections),
    )
