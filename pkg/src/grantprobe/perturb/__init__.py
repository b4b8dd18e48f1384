from .engine import BatchManifest, apply, batch_apply
from .model import (
    Applicability,
    Axis,
    PerturbationSpec,
    PerturbedVariant,
    TargetScope,
    TransformKind,
)
from .registry import registry, registry_records

__all__ = [
    "Applicability",
    "Axis",
    "BatchManifest",
    "PerturbationSpec",
    "PerturbedVariant",
    "TargetScope",
    "TransformKind",
    "apply",
    "batch_apply",
    "registry",
    "registry_records",
]
