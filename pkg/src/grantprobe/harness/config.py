"""Run configuration: one YAML file plus environment overrides."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from ..modelgw import EndpointConfig, Gateway, HttpTransport, MockTransport

ENV_PREFIX = "GRANTPROBE_"


@dataclass
class EndpointSettings:
    model: str
    base_url: str = ""
    api_key: str = ""
    supports_effort: bool = True

    def to_endpoint(self, name: str) -> EndpointConfig:
        return EndpointConfig(
            name=name,
            model=self.model,
            base_url=self.base_url,
            api_key=self.api_key,
            supports_effort=self.supports_effort,
        )


@dataclass
class Config:
    seed: int = 1234
    transport: str = "mock"  # mock | http
    concurrency: int = 1
    retry_cap: int = 3
    backoff_base_ms: int = 250
    repeats: int = 1
    effort: str = "high"
    reviewer: EndpointSettings = field(default_factory=lambda: EndpointSettings(model="reviewer-20b"))
    judges: list[EndpointSettings] = field(
        default_factory=lambda: [
            EndpointSettings(model="judge-a"),
            EndpointSettings(model="judge-b"),
            EndpointSettings(model="judge-c"),
        ]
    )
    embedder: EndpointSettings = field(default_factory=lambda: EndpointSettings(model="embed-small"))
    match_similarity: float = 0.5
    cluster_merge: float = 0.80

    def digest(self) -> str:
        doc = {
            "seed": self.seed,
            "transport": self.transport,
            "concurrency": self.concurrency,
            "retry_cap": self.retry_cap,
            "backoff_base_ms": self.backoff_base_ms,
            "repeats": self.repeats,
            "effort": self.effort,
            "reviewer": self.reviewer.__dict__,
            "judges": [j.__dict__ for j in self.judges],
            "embedder": self.embedder.__dict__,
            "match_similarity": self.match_similarity,
            "cluster_merge": self.cluster_merge,
        }
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode("utf-8")).hexdigest()

    def make_gateway(self) -> Gateway:
        if self.transport == "mock":
            transport = MockTransport()
        elif self.transport == "http":
            transport = HttpTransport()
        else:
            raise ValueError(f"unknown transport {self.transport!r}")
        return Gateway(
            transport,
            retry_cap=self.retry_cap,
            backoff_base_ms=self.backoff_base_ms,
        )

    def judge_endpoints(self) -> list[EndpointConfig]:
        return [j.to_endpoint(f"judge-{i}") for i, j in enumerate(self.judges)]


def _endpoint_from(doc: dict, default_model: str) -> EndpointSettings:
    return EndpointSettings(
        model=doc.get("model", default_model),
        base_url=doc.get("base_url", ""),
        api_key=doc.get("api_key", ""),
        supports_effort=bool(doc.get("supports_effort", True)),
    )


def load_config(path: Optional[str | Path] = None) -> Config:
    """Config from YAML with ``GRANTPROBE_*`` environment overrides."""
    doc: dict = {}
    if path is not None:
        doc = yaml.safe_load(Path(path).read_text("utf-8")) or {}
    cfg = Config()
    cfg.seed = int(doc.get("seed", cfg.seed))
    cfg.transport = str(doc.get("transport", cfg.transport))
    cfg.concurrency = int(doc.get("concurrency", cfg.concurrency))
    cfg.retry_cap = int(doc.get("retry_cap", cfg.retry_cap))
    cfg.backoff_base_ms = int(doc.get("backoff_base_ms", cfg.backoff_base_ms))
    cfg.repeats = int(doc.get("repeats", cfg.repeats))
    cfg.effort = str(doc.get("effort", cfg.effort))
    if "reviewer" in doc:
        cfg.reviewer = _endpoint_from(doc["reviewer"], "reviewer-20b")
    if "judges" in doc:
        cfg.judges = [_endpoint_from(j, f"judge-{i}") for i, j in enumerate(doc["judges"])]
    if "embedder" in doc:
        cfg.embedder = _endpoint_from(doc["embedder"], "embed-small")
    thresholds = doc.get("thresholds", {})
    cfg.match_similarity = float(thresholds.get("match_similarity", cfg.match_similarity))
    cfg.cluster_merge = float(thresholds.get("cluster_merge", cfg.cluster_merge))

    # environment overrides
    if os.environ.get(ENV_PREFIX + "SEED"):
        cfg.seed = int(os.environ[ENV_PREFIX + "SEED"])
    if os.environ.get(ENV_PREFIX + "TRANSPORT"):
        cfg.transport = os.environ[ENV_PREFIX + "TRANSPORT"]
    if os.environ.get(ENV_PREFIX + "EFFORT"):
        cfg.effort = os.environ[ENV_PREFIX + "EFFORT"]
    if os.environ.get(ENV_PREFIX + "API_KEY"):
        key = os.environ[ENV_PREFIX + "API_KEY"]
        cfg.reviewer.api_key = key
        cfg.embedder.api_key = key
        for judge in cfg.judges:
            judge.api_key = key
    if os.environ.get(ENV_PREFIX + "BASE_URL"):
        url = os.environ[ENV_PREFIX + "BASE_URL"]
        cfg.reviewer.base_url = url
        cfg.embedder.base_url = url
        for judge in cfg.judges:
            judge.base_url = url
    if len(cfg.judges) != 3:
        raise ValueError(f"config must name exactly 3 judges, got {len(cfg.judges)}")
    return cfg
