"""The run manifest ties streams, digests, and ledgers together."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    run_id: str
    seed: int
    config_digest: str
    corpus_digests: dict[str, str] = field(default_factory=dict)
    registry_digest: str = ""
    stage_ledgers: dict[str, dict[str, Any]] = field(default_factory=dict)
    streams: dict[str, list[str]] = field(default_factory=dict)

    @classmethod
    def create(cls, seed: int, config_digest: str) -> "RunManifest":
        run_id = hashlib.sha256(f"{seed}:{config_digest}".encode("utf-8")).hexdigest()[:12]
        return cls(run_id=run_id, seed=seed, config_digest=config_digest)

    @classmethod
    def load(cls, run_dir: str | Path) -> "RunManifest":
        doc = json.loads((Path(run_dir) / MANIFEST_NAME).read_text("utf-8"))
        return cls(**doc)

    @classmethod
    def load_or_create(cls, run_dir: str | Path, seed: int, config_digest: str) -> "RunManifest":
        path = Path(run_dir) / MANIFEST_NAME
        if path.exists():
            return cls.load(run_dir)
        return cls.create(seed, config_digest)

    def record_stage(
        self, stage: str, stream_path: Path | None = None, ledger: dict | None = None
    ) -> None:
        if stream_path is not None:
            self.streams.setdefault(stage, [])
            if stream_path.name not in self.streams[stage]:
                self.streams[stage].append(stream_path.name)
        if ledger is not None:
            self.stage_ledgers[stage] = ledger

    def save(self, run_dir: str | Path) -> Path:
        path = Path(run_dir) / MANIFEST_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {
            "run_id": self.run_id,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "corpus_digests": dict(sorted(self.corpus_digests.items())),
            "registry_digest": self.registry_digest,
            "stage_ledgers": self.stage_ledgers,
            "streams": self.streams,
        }
        path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        return path
