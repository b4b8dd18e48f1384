"""Annotation service: task assignment under the section-coverage constraint.

No annotator is ever issued tasks covering all sections of any single
proposal; every accepted record is flushed to disk before the acknowledging
response is sent.
"""
from __future__ import annotations

import json
import os
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from ..claims import TaxonomyCategory
from ..corpus import ProposalBundle, SectionKind
from ..errors import ConstraintViolation, DuplicateAnnotation

SEVERITY_LEVELS = ("None", "Little", "Some", "Substantial", "Pivotal")

#: Where each claim category is read in context.
_CATEGORY_SECTION = {
    TaxonomyCategory.FUNDING.value: SectionKind.RESOURCES_AND_COSTS,
    TaxonomyCategory.TIMELINE.value: SectionKind.VISION_AND_APPROACH,
    TaxonomyCategory.COMPETENCY.value: SectionKind.TEAM_CAPABILITY,
    TaxonomyCategory.ETHICS.value: SectionKind.ETHICS_RRI,
    TaxonomyCategory.CLARITY.value: SectionKind.VISION_AND_APPROACH,
    TaxonomyCategory.IMPACT.value: SectionKind.VISION_AND_APPROACH,
    TaxonomyCategory.ALIGNMENT.value: SectionKind.SUMMARY,
}


@dataclass(frozen=True)
class AnnotationTask:
    task_id: str
    proposal_id: str
    section_ordinal: int
    section_heading: str
    section_text: str
    opportunity_excerpt: str
    guidelines: str
    claim_id: str
    claim_text: str
    claim_valence: str

    def to_view(self, done: int, total: int) -> dict:
        return {
            "task_id": self.task_id,
            "proposal_id": self.proposal_id,
            "section": {"heading": self.section_heading, "text": self.section_text},
            "opportunity_excerpt": self.opportunity_excerpt,
            "guidelines": self.guidelines,
            "claim": {
                "claim_id": self.claim_id,
                "text": self.claim_text,
                "valence": self.claim_valence,
            },
            "progress": {"done": done, "total": total},
        }


def build_tasks(bundles: list[ProposalBundle], claims: list[dict]) -> tuple[list[AnnotationTask], dict[str, set[int]]]:
    """Claims joined to their context section; returns tasks plus the full
    section set per proposal (the coverage denominator)."""
    by_id = {b.proposal_id: b for b in bundles}
    proposal_sections = {b.proposal_id: {s.ordinal for s in b.sections} for b in bundles}
    tasks: list[AnnotationTask] = []
    for claim in claims:
        base_id = str(claim["proposal_id"]).split("::", 1)[0]
        bundle = by_id.get(base_id)
        if bundle is None:
            continue
        kind = _CATEGORY_SECTION.get(claim.get("category") or "", None)
        section = bundle.section(kind) if kind else None
        if section is None:
            section = bundle.sections[0]
        tasks.append(
            AnnotationTask(
                task_id=f"task:{claim['claim_id']}",
                proposal_id=base_id,
                section_ordinal=section.ordinal,
                section_heading=section.heading,
                section_text=section.body,
                opportunity_excerpt=bundle.opportunity.looking_for,
                guidelines=bundle.opportunity.guidelines,
                claim_id=claim["claim_id"],
                claim_text=claim["text"],
                claim_valence=claim["valence"],
            )
        )
    return tasks, proposal_sections


@dataclass
class AnnotationStore:
    tasks: list[AnnotationTask]
    proposal_sections: dict[str, set[int]]
    roster: list[str]
    out_path: Path
    seed: int = 0
    issued: dict[tuple[str, str], set[int]] = field(default_factory=dict)
    completed: dict[str, set[str]] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self) -> None:
        order = list(self.tasks)
        random.Random(f"tasks:{self.seed}").shuffle(order)
        self.tasks = order
        self.out_path = Path(self.out_path)
        self.out_path.parent.mkdir(parents=True, exist_ok=True)
        if self.out_path.exists():
            for line in self.out_path.read_text("utf-8").splitlines():
                if line.strip():
                    record = json.loads(line)
                    self.completed.setdefault(record["annotator"], set()).add(record["claim_id"])

    def _violates(self, annotator: str, task: AnnotationTask) -> bool:
        seen = self.issued.get((annotator, task.proposal_id), set())
        if task.section_ordinal in seen:
            return False
        would_cover = seen | {task.section_ordinal}
        return would_cover == self.proposal_sections[task.proposal_id]

    def next_task(self, annotator: str, proposal: Optional[str] = None) -> Optional[AnnotationTask]:
        """Next assignable task; raises ConstraintViolation when a proposal
        filter leaves only coverage-completing tasks."""
        if annotator not in self.roster:
            raise KeyError(annotator)
        with self._lock:
            done = self.completed.get(annotator, set())
            blocked = False
            for task in self.tasks:
                if task.claim_id in done:
                    continue
                if proposal and task.proposal_id != proposal:
                    continue
                if self._violates(annotator, task):
                    blocked = True
                    continue
                seen = self.issued.setdefault((annotator, task.proposal_id), set())
                seen.add(task.section_ordinal)
                return task
            if proposal and blocked:
                raise ConstraintViolation(
                    f"remaining tasks for {proposal} would complete {annotator}'s section coverage"
                )
            return None

    def submit(
        self, annotator: str, claim_id: str, validity: str, agreement: int, severity: str
    ) -> dict:
        if annotator not in self.roster:
            raise KeyError(annotator)
        if validity not in ("valid", "invalid"):
            raise ValueError(f"validity must be valid|invalid, got {validity!r}")
        if not isinstance(agreement, int) or not 1 <= agreement <= 5:
            raise ValueError(f"agreement must be an integer in [1, 5], got {agreement!r}")
        if severity not in SEVERITY_LEVELS:
            raise ValueError(f"severity must be one of {SEVERITY_LEVELS}, got {severity!r}")
        if not any(t.claim_id == claim_id for t in self.tasks):
            raise KeyError(claim_id)
        with self._lock:
            if claim_id in self.completed.get(annotator, set()):
                raise DuplicateAnnotation(f"{annotator} already annotated {claim_id}")
            record = {
                "annotator": annotator,
                "claim_id": claim_id,
                "validity": validity,
                "agreement": agreement,
                "severity": severity,
                "timestamp": time.time(),
            }
            # human labour is expensive to lose: flush before acknowledging
            with self.out_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self.completed.setdefault(annotator, set()).add(claim_id)
            return record

    def progress(self) -> dict:
        with self._lock:
            return {
                "claims": len(self.tasks),
                "annotators": list(self.roster),
                "completed": {a: len(c) for a, c in sorted(self.completed.items())},
                "total_records": sum(len(c) for c in self.completed.values()),
            }


class AnnotationBody(BaseModel):
    annotator: str
    claim_id: str
    validity: str
    agreement: int
    severity: str


def create_app(store: AnnotationStore) -> FastAPI:
    app = FastAPI(title="grantprobe annotation service")

    @app.get("/tasks/next")
    def tasks_next(annotator: str = Query(...), proposal: Optional[str] = Query(None)):
        try:
            task = store.next_task(annotator, proposal)
        except KeyError:
            return JSONResponse({"error": "unknown annotator"}, status_code=403)
        except ConstraintViolation as exc:
            return JSONResponse({"error": "constraint", "detail": str(exc)}, status_code=409)
        if task is None:
            return Response(status_code=204)
        done = len(store.completed.get(annotator, set()))
        return task.to_view(done=done, total=len(store.tasks))

    @app.post("/annotations", status_code=201)
    def annotations(body: AnnotationBody):
        try:
            record = store.submit(
                body.annotator, body.claim_id, body.validity, body.agreement, body.severity
            )
        except KeyError as exc:
            return JSONResponse({"error": f"unknown: {exc}"}, status_code=404)
        except ValueError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        except DuplicateAnnotation as exc:
            return JSONResponse({"error": "duplicate", "detail": str(exc)}, status_code=409)
        return record

    @app.get("/progress")
    def progress():
        return store.progress()

    return app
