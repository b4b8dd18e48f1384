"""Applying perturbation specs to bundles and batching over a corpus."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..corpus import ProposalBundle, unified_diff
from ..errors import NotApplicable, TransformFailed
from .model import Applicability, PerturbationSpec, PerturbedVariant
from .transforms import transform_bundle


def apply(spec: PerturbationSpec, bundle: ProposalBundle, seed: int) -> PerturbedVariant:
    """One deterministic fault injection.

    Returns an ``applied`` variant with a non-empty diff, or a
    ``not_applicable`` variant carrying the machine-readable reason when the
    spec's scope is absent or its rules matched nothing.
    """
    try:
        mutated = transform_bundle(spec, bundle, seed)
    except NotApplicable as exc:
        return PerturbedVariant(
            base_proposal_id=bundle.proposal_id,
            perturbation_id=spec.id,
            bundle=None,
            diff=None,
            applicability=Applicability.NOT_APPLICABLE,
            reason=exc.reason,
        )
    except TransformFailed as exc:
        return PerturbedVariant(
            base_proposal_id=bundle.proposal_id,
            perturbation_id=spec.id,
            bundle=None,
            diff=None,
            applicability=Applicability.NOT_APPLICABLE,
            reason=f"no_op: {exc}",
        )
    diff = unified_diff(bundle, mutated)
    if diff.is_empty:
        return PerturbedVariant(
            base_proposal_id=bundle.proposal_id,
            perturbation_id=spec.id,
            bundle=None,
            diff=None,
            applicability=Applicability.NOT_APPLICABLE,
            reason="no_op: transform produced identical document",
        )
    return PerturbedVariant(
        base_proposal_id=bundle.proposal_id,
        perturbation_id=spec.id,
        bundle=mutated,
        diff=diff,
        applicability=Applicability.APPLIED,
    )


@dataclass
class BatchManifest:
    seed: int
    applied: int = 0
    not_applicable: int = 0
    entries: list[dict] = field(default_factory=list)

    def record(self, variant: PerturbedVariant) -> None:
        if variant.applicability is Applicability.APPLIED:
            self.applied += 1
        else:
            self.not_applicable += 1
        self.entries.append(
            {
                "proposal_id": variant.base_proposal_id,
                "perturbation_id": variant.perturbation_id,
                "applicability": variant.applicability.value,
                "reason": variant.reason,
            }
        )

    def to_record(self) -> dict:
        return {
            "seed": self.seed,
            "applied": self.applied,
            "not_applicable": self.not_applicable,
            "entries": self.entries,
        }


def batch_apply(
    bundles: Sequence[ProposalBundle],
    specs: Sequence[PerturbationSpec],
    seed: int,
) -> tuple[list[PerturbedVariant], BatchManifest]:
    """Cartesian product of bundles x specs, in deterministic order.

    Per-item inapplicability is tallied in the manifest instead of aborting
    the batch.
    """
    manifest = BatchManifest(seed=seed)
    variants: list[PerturbedVariant] = []
    for bundle in bundles:
        for spec in specs:
            variant = apply(spec, bundle, seed)
            manifest.record(variant)
            variants.append(variant)
    return variants, manifest
