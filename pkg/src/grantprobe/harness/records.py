"""Append-only, versioned, line-delimited record streams.

Re-running a stage writes a new versioned file and updates the index; files
are never mutated in place.  Serialization is canonical (sorted keys, no
timestamps) so identical runs are byte-identical.
"""
from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path
from typing import Iterable, Iterator

SCHEMA_VERSION = 1
_STREAM_RE = re.compile(r"^(?P<stage>[a-z_]+)-v(?P<version>\d{4})\.jsonl$")


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


def write_stream(run_dir: str | Path, stage: str, records: Iterable[dict]) -> Path:
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    version = 1
    for existing in run_dir.glob(f"{stage}-v*.jsonl"):
        m = _STREAM_RE.match(existing.name)
        if m and m.group("stage") == stage:
            version = max(version, int(m.group("version")) + 1)
    path = run_dir / f"{stage}-v{version:04d}.jsonl"
    schema = f"grantprobe/{stage}@{SCHEMA_VERSION}"
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(_dump({"schema": schema, **record}) + "\n")
    _update_index(run_dir, stage, path.name)
    return path


def _update_index(run_dir: Path, stage: str, filename: str) -> None:
    index_path = run_dir / "index.json"
    index: dict = {}
    if index_path.exists():
        index = json.loads(index_path.read_text("utf-8"))
    index.setdefault(stage, [])
    if filename not in index[stage]:
        index[stage].append(filename)
    index_path.write_text(_dump(index) + "\n", encoding="utf-8")


def latest_stream(run_dir: str | Path, stage: str) -> Path | None:
    run_dir = Path(run_dir)
    candidates = sorted(run_dir.glob(f"{stage}-v*.jsonl"))
    return candidates[-1] if candidates else None


def read_stream(path: str | Path) -> Iterator[dict]:
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def read_latest(run_dir: str | Path, stage: str) -> list[dict]:
    path = latest_stream(run_dir, stage)
    if path is None:
        raise FileNotFoundError(f"no {stage!r} stream in {run_dir}; run that stage first")
    return list(read_stream(path))


def stream_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
