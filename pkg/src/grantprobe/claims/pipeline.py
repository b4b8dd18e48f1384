"""Claim decomposition, labelling, clustering, and cross-set alignment."""
from __future__ import annotations

import json
from collections import defaultdict
from typing import Optional, Sequence

import numpy as np

from ..errors import EmptyClaims, UnknownCategory, UnknownRelation
from ..modelgw import ChatRequest, EndpointConfig, Gateway
from .model import Claim, ExclusivityReport, ExclusivityRow, MatchRecord, Relation, TaxonomyCategory, Valence
from .taxonomy import taxonomy_vocabulary

DECOMPOSE_TEMPLATE = """\
Break the review text below into atomic review claims. A claim addresses one
specific topic within the grant proposal and expresses one valence (positive,
neutral or negative). Sentences assessing several aspects at once must be
split into one claim per aspect; single-aspect sentences may pass through
unchanged. Every claim must cite the exact sentence it came from.

Respond with a JSON array of objects, each with fields "source_sentence",
"text" and "valence".

## Review
{review}"""

CLASSIFY_TEMPLATE = """\
Classify the claim below into exactly one of these categories:
Competency, Funding, Timeline, Alignment, Clarity, Impact, Ethics.

Category vocabulary (component / sub-component: aspects):
{vocabulary}

Respond with exactly one category name and nothing else.

## Claim
{claim}"""

ASPECT_TEMPLATE = """\
The claims below form one cluster about a single topic. Produce a concise
three-word aspect (at most three words) naming that topic. Respond with the
aspect only.

## Claims
{claims}"""

RELATION_TEMPLATE = """\
Label the relation between the claim and its candidate matches as one of
EXACT, DIFFERENT or CONTRADICTION:
- EXACT: the claims address the same topic and express the same valence.
- CONTRADICTION: the claims address the same topic with opposing valence.
- DIFFERENT: partial topical overlap without clear agreement in valence.

Respond with exactly one label.

## Claim
{claim_text}
(valence: {claim_valence})

## Candidates
{candidates}"""


def _claim_id(prefix: str, index: int) -> str:
    return f"{prefix}#{index:03d}"


def decompose_review(
    review_text: str,
    gateway: Gateway,
    endpoint: EndpointConfig,
    source: str,
    proposal_id: str,
    id_prefix: Optional[str] = None,
) -> list[Claim]:
    """Atomic valenced claims from one review; category/aspect left unset."""
    if not review_text.strip():
        raise EmptyClaims("review text is empty")
    req = ChatRequest(
        system_text="You decompose grant review text into atomic evaluative claims.",
        user_text=DECOMPOSE_TEMPLATE.format(review=review_text),
        want_structured=True,
    )
    result = gateway.chat(endpoint, req, stage="claims/decompose")
    try:
        items = json.loads(result.text)
    except json.JSONDecodeError:
        start = result.text.find("[")
        end = result.text.rfind("]")
        if start == -1 or end <= start:
            raise EmptyClaims("decomposition returned no parseable claims")
        items = json.loads(result.text[start : end + 1])
    prefix = id_prefix or f"{source}:{proposal_id}"
    claims = []
    for i, item in enumerate(items):
        text = str(item.get("text", "")).strip()
        if not text:
            continue
        claims.append(
            Claim(
                claim_id=_claim_id(prefix, i),
                source=source,
                proposal_id=proposal_id,
                source_sentence=str(item.get("source_sentence", text)),
                text=text,
                valence=Valence(str(item.get("valence", "neutral"))),
            )
        )
    if not claims:
        raise EmptyClaims("decomposition produced no claims")
    return claims


def classify_category(
    claim: Claim, gateway: Gateway, endpoint: EndpointConfig
) -> TaxonomyCategory:
    req = ChatRequest(
        system_text="You label grant review claims with taxonomy categories.",
        user_text=CLASSIFY_TEMPLATE.format(
            vocabulary=taxonomy_vocabulary(), claim=claim.text
        ),
    )
    for attempt in range(2):
        result = gateway.chat(endpoint, req, stage="claims/classify")
        token = result.text.strip().split("\n")[0].strip().strip(".").capitalize()
        try:
            return TaxonomyCategory(token)
        except ValueError:
            req = ChatRequest(
                system_text=req.system_text,
                user_text=req.user_text
                + f"\n\nYour previous answer ({result.text.strip()[:60]!r}) was not "
                "one of the seven category names. Respond with exactly one of: "
                "Competency, Funding, Timeline, Alignment, Clarity, Impact, Ethics.",
            )
    raise UnknownCategory(f"could not classify claim {claim.claim_id}")


def _cosine_matrix(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    unit = vectors / norms
    return unit @ unit.T


def cluster_claims(
    claims: Sequence[Claim],
    gateway: Gateway,
    endpoint: EndpointConfig,
    merge_threshold: float = 0.80,
) -> dict[str, str]:
    """Average-link agglomerative clustering on cosine similarity.

    Claims are canonicalised (sorted by text) before clustering, so the
    result is invariant to input order; singleton clusters are allowed.
    Returns claim_id -> cluster_id.
    """
    if not claims:
        raise ValueError("need at least one claim")
    ordered = sorted(claims, key=lambda c: (c.text, c.claim_id))
    vectors = gateway.embed(endpoint, [c.text for c in ordered], stage="claims/embed")
    matrix = _cosine_matrix(np.array([v.values for v in vectors], dtype=float))

    clusters: list[list[int]] = [[i] for i in range(len(ordered))]
    while len(clusters) > 1:
        best_pair: tuple[int, int] | None = None
        best_avg = -1.0
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                avg = float(np.mean(matrix[np.ix_(clusters[a], clusters[b])]))
                if avg > best_avg + 1e-12:
                    best_avg = avg
                    best_pair = (a, b)
        if best_pair is None or best_avg < merge_threshold:
            break
        a, b = best_pair
        clusters[a] = sorted(clusters[a] + clusters[b])
        del clusters[b]

    assignment: dict[str, str] = {}
    for cluster in sorted(clusters, key=lambda c: c[0]):
        cluster_id = f"cluster:{ordered[cluster[0]].claim_id}"
        for idx in cluster:
            assignment[ordered[idx].claim_id] = cluster_id
    return assignment


def name_aspect(
    cluster: Sequence[Claim], gateway: Gateway, endpoint: EndpointConfig
) -> str:
    """A <=3 word aspect shared by every claim in the cluster."""
    if not cluster:
        raise ValueError("cluster must be non-empty")
    listing = "\n".join(f"- {c.text}" for c in cluster)
    req = ChatRequest(
        system_text="You name the shared topic of clustered review claims.",
        user_text=ASPECT_TEMPLATE.format(claims=listing),
    )
    aspect = gateway.chat(endpoint, req, stage="claims/aspect").text.strip()
    if len(aspect.split()) > 3:
        retry = ChatRequest(
            system_text=req.system_text,
            user_text=req.user_text
            + f"\n\nYour previous answer ({aspect!r}) used more than three words. "
            "Respond with at most three words.",
        )
        aspect = gateway.chat(endpoint, retry, stage="claims/aspect").text.strip()
        if len(aspect.split()) > 3:
            aspect = " ".join(aspect.split()[:3])
    return aspect


def remerge(claims: Sequence[Claim]) -> list[Claim]:
    """Re-merge decomposed fragments that share (source_sentence, valence,
    aspect) back into their composite sentence; all other claims pass
    through untouched."""
    groups: dict[tuple[str, str, str, str], list[Claim]] = defaultdict(list)
    for claim in claims:
        key = (claim.source, claim.source_sentence, claim.valence.value, claim.aspect or "")
        groups[key].append(claim)
    merged: list[Claim] = []
    for group in groups.values():
        if len(group) == 1:
            merged.append(group[0])
            continue
        first = min(group, key=lambda c: c.claim_id)
        merged.append(
            Claim(
                claim_id=first.claim_id,
                source=first.source,
                proposal_id=first.proposal_id,
                source_sentence=first.source_sentence,
                text=first.source_sentence,
                valence=first.valence,
                category=first.category,
                aspect=first.aspect,
                cluster_id=first.cluster_id,
            )
        )
    merged.sort(key=lambda c: c.claim_id)
    return merged


def _similarity_lookup(
    claims_a: Sequence[Claim],
    claims_b: Sequence[Claim],
    gateway: Gateway,
    endpoint: EndpointConfig,
) -> np.ndarray:
    texts = [c.text for c in claims_a] + [c.text for c in claims_b]
    vectors = gateway.embed(endpoint, texts, stage="claims/match-embed")
    arr = np.array([v.values for v in vectors], dtype=float)
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    unit = arr / norms
    a = unit[: len(claims_a)]
    b = unit[len(claims_a) :]
    return a @ b.T


def bidirectional_match(
    set_a: Sequence[Claim],
    set_b: Sequence[Claim],
    gateway: Gateway,
    endpoint: EndpointConfig,
    threshold: float = 0.5,
) -> list[MatchRecord]:
    """For each claim, candidates from the opposite set at or above the
    similarity threshold; claims with none are exclusive.  Matching is
    direction-specific, so asymmetry is allowed."""
    if not set_a or not set_b:
        records = [
            MatchRecord(claim_id=c.claim_id, direction="A->B", candidates=(), threshold=threshold)
            for c in set_a
        ]
        records += [
            MatchRecord(claim_id=c.claim_id, direction="B->A", candidates=(), threshold=threshold)
            for c in set_b
        ]
        return records
    sims = _similarity_lookup(set_a, set_b, gateway, endpoint)
    records: list[MatchRecord] = []
    for i, claim in enumerate(set_a):
        pairs = [
            (set_b[j].claim_id, float(sims[i, j]))
            for j in range(len(set_b))
            if sims[i, j] >= threshold
        ]
        pairs.sort(key=lambda p: (-p[1], p[0]))
        records.append(
            MatchRecord(
                claim_id=claim.claim_id, direction="A->B",
                candidates=tuple(pairs), threshold=threshold,
            )
        )
    for j, claim in enumerate(set_b):
        pairs = [
            (set_a[i].claim_id, float(sims[i, j]))
            for i in range(len(set_a))
            if sims[i, j] >= threshold
        ]
        pairs.sort(key=lambda p: (-p[1], p[0]))
        records.append(
            MatchRecord(
                claim_id=claim.claim_id, direction="B->A",
                candidates=tuple(pairs), threshold=threshold,
            )
        )
    return records


def relation_by_valence(claim: Claim, best_candidate: Claim) -> Relation:
    """Deterministic fallback: compare valences only."""
    if claim.valence == best_candidate.valence:
        return Relation.EXACT
    if {claim.valence, best_candidate.valence} == {Valence.POSITIVE, Valence.NEGATIVE}:
        return Relation.CONTRADICTION
    return Relation.DIFFERENT


def label_relation(
    claim: Claim,
    candidates: Sequence[Claim],
    gateway: Gateway,
    endpoint: EndpointConfig,
    strict: bool = False,
) -> Relation:
    """Model-labelled relation with one reprompt; falls back to the
    deterministic valence rule unless ``strict``."""
    if not candidates:
        raise ValueError("label_relation needs at least one candidate")
    listing = "\n".join(f"- {c.text} (valence: {c.valence.value})" for c in candidates)
    req = ChatRequest(
        system_text="You label relations between grant review claims.",
        user_text=RELATION_TEMPLATE.format(
            claim_text=claim.text, claim_valence=claim.valence.value, candidates=listing
        ),
    )
    for attempt in range(2):
        result = gateway.chat(endpoint, req, stage="claims/relation")
        token = result.text.strip().split()[0].strip(".,").upper() if result.text.strip() else ""
        try:
            return Relation(token)
        except ValueError:
            req = ChatRequest(
                system_text=req.system_text,
                user_text=req.user_text
                + "\n\nYour previous answer was not one of EXACT, DIFFERENT or "
                "CONTRADICTION. Respond with exactly one of those labels.",
            )
    if strict:
        raise UnknownRelation(f"unparseable relation for claim {claim.claim_id}")
    return relation_by_valence(claim, candidates[0])


def exclusivity_report(
    claims: Sequence[Claim],
    matches: Sequence[MatchRecord],
    relations: Optional[dict[str, Relation]] = None,
) -> ExclusivityReport:
    """Retained and contradiction rates per (source, category), plus valence
    histograms per source."""
    relations = relations or {}
    match_by_claim = {m.claim_id: m for m in matches}
    per_cell: dict[tuple[str, str], ExclusivityRow] = {}
    per_source: dict[str, dict[str, int]] = defaultdict(lambda: {"total": 0, "exclusive": 0, "contradictions": 0})
    valence_counts: dict[str, dict[str, int]] = defaultdict(lambda: {v.value: 0 for v in Valence})

    for claim in claims:
        category = claim.category.value if claim.category else "Unlabelled"
        key = (claim.source, category)
        row = per_cell.setdefault(
            key, ExclusivityRow(source=claim.source, category=category, total=0, exclusive=0, contradictions=0)
        )
        row.total += 1
        per_source[claim.source]["total"] += 1
        valence_counts[claim.source][claim.valence.value] += 1
        record = match_by_claim.get(claim.claim_id)
        if record is None or record.exclusive:
            row.exclusive += 1
            per_source[claim.source]["exclusive"] += 1
        relation = relations.get(claim.claim_id) or (record.relation if record else None)
        if relation is Relation.CONTRADICTION:
            row.contradictions += 1
            per_source[claim.source]["contradictions"] += 1

    histograms = {
        source: {
            valence: (count / sum(counts.values()) if sum(counts.values()) else 0.0)
            for valence, count in counts.items()
        }
        for source, counts in valence_counts.items()
    }
    source_totals = {
        source: {
            **counts,
            "retained_rate": counts["exclusive"] / counts["total"] if counts["total"] else 0.0,
            "contradiction_rate": counts["contradictions"] / counts["total"] if counts["total"] else 0.0,
        }
        for source, counts in per_source.items()
    }
    rows = sorted(per_cell.values(), key=lambda r: (r.source, r.category))
    return ExclusivityReport(rows=rows, valence_histograms=histograms, source_totals=source_totals)
