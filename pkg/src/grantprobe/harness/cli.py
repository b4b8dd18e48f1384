"""Command-line pipeline: ingest -> perturb -> review -> judge -> claims ->
stats -> report, plus the annotation service."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from collections import defaultdict
from pathlib import Path
from typing import Optional, Sequence

import yaml

from .. import __version__
from ..claims import (
    Claim,
    bidirectional_match,
    claim_to_dict,
    classify_category,
    cluster_claims,
    decompose_review,
    exclusivity_report,
    label_relation,
    name_aspect,
    remerge,
)
from ..corpus import ProposalBundle, parse_proposal
from ..corpus.model import bundle_from_record, bundle_to_record
from ..errors import GrantProbeError
from ..judging import judge_pair
from ..perturb import batch_apply, registry, registry_records
from ..perturb.registry import spec_by_id
from ..review import ReviewSystem, record_from_dict, record_to_dict, run_review
from ..stats import (
    krippendorff_alpha,
    kruskal_wallis,
    score_degradation,
)
from .config import Config, load_config
from .manifest import RunManifest
from .records import read_stream, write_stream
from .reporting import (
    detection_report,
    reliability_report,
    render_heatmap,
    render_reliability_figure,
    write_detection_csv,
    write_heatmap_csv,
    write_reliability_csv,
    write_run_summary_csv,
)


# -- stream helpers -------------------------------------------------------------


def _read_all(run_dir: Path, stage: str, dedup_key=None) -> list[dict]:
    """Union of every versioned file for a stage; later versions supersede
    earlier records with the same key."""
    index_path = run_dir / "index.json"
    if not index_path.exists():
        raise FileNotFoundError(f"{run_dir} has no index.json; run ingest first")
    index = json.loads(index_path.read_text("utf-8"))
    files = index.get(stage, [])
    if not files:
        raise FileNotFoundError(f"no {stage!r} stream in {run_dir}; run that stage first")
    records: list[dict] = []
    for name in files:
        records.extend(read_stream(run_dir / name))
    if dedup_key is None:
        return records
    deduped: dict = {}
    for record in records:
        deduped[dedup_key(record)] = record
    return list(deduped.values())


def _load_bundles(run_dir: Path) -> list[ProposalBundle]:
    return [bundle_from_record(r) for r in _read_all(run_dir, "bundles", lambda r: r["proposal_id"])]


def _manifest(run_dir: Path, cfg: Config) -> RunManifest:
    return RunManifest.load_or_create(run_dir, cfg.seed, cfg.digest())


# -- stages -----------------------------------------------------------------------


def stage_ingest(corpus: Path, manifest_path: Optional[Path], run_dir: Path, cfg: Config) -> Path:
    manifests: list[Path]
    if manifest_path is not None:
        manifests = [manifest_path]
    else:
        manifests = sorted(corpus.glob("*/manifest.yaml"))
        if (corpus / "manifest.yaml").exists():
            manifests.insert(0, corpus / "manifest.yaml")
    if not manifests:
        raise GrantProbeError(f"no manifest.yaml found under {corpus}")

    records = []
    run = _manifest(run_dir, cfg)
    for mpath in manifests:
        doc = yaml.safe_load(mpath.read_text("utf-8"))
        base = mpath.parent
        files = {}
        hints = {}
        for label, hint in doc["files"].items():
            files[label] = (base / label).read_text("utf-8")
            if hint and hint != "auto":
                hints[label] = hint
        bundle = parse_proposal(files, hints, proposal_id=doc["proposal_id"])
        records.append(bundle_to_record(bundle))
        run.corpus_digests.update(
            {f"{bundle.proposal_id}/{k}": v for k, v in bundle.provenance.items()}
        )
    path = write_stream(run_dir, "bundles", records)
    run.record_stage("bundles", path)
    run.save(run_dir)
    return path


def stage_perturb(run_dir: Path, cfg: Config, spec_ids: Optional[Sequence[str]] = None,
                  per_axis: Optional[int] = None) -> Path:
    bundles = _load_bundles(run_dir)
    specs = registry()
    if spec_ids:
        specs = [spec_by_id(s) for s in spec_ids]
    elif per_axis:
        chosen = []
        seen: dict[str, int] = defaultdict(int)
        for spec in specs:
            if seen[spec.axis.value] < per_axis:
                chosen.append(spec)
                seen[spec.axis.value] += 1
        specs = chosen

    variants, manifest = batch_apply(bundles, specs, cfg.seed)
    records = []
    for variant in variants:
        record = {
            "base_proposal_id": variant.base_proposal_id,
            "perturbation_id": variant.perturbation_id,
            "variant_id": variant.variant_id,
            "applicability": variant.applicability.value,
            "reason": variant.reason,
            "bundle": bundle_to_record(variant.bundle) if variant.bundle else None,
            "diff": {
                "text": variant.diff.text,
                "files": [list(pair) for pair in variant.diff.files],
            }
            if variant.diff
            else None,
        }
        records.append(record)

    run = _manifest(run_dir, cfg)
    path = write_stream(run_dir, "variants", records)
    write_stream(run_dir, "perturb_manifest", [manifest.to_record()])
    registry_path = write_stream(run_dir, "registry", registry_records())
    run.registry_digest = hashlib.sha256(registry_path.read_bytes()).hexdigest()
    run.record_stage("variants", path)
    run.save(run_dir)
    return path


def _review_targets(run_dir: Path, which: str) -> list[tuple[str, Optional[str], ProposalBundle]]:
    """(target_id, perturbation_id, bundle) triples in deterministic order."""
    targets: list[tuple[str, Optional[str], ProposalBundle]] = []
    if which in ("all", "originals"):
        for bundle in _load_bundles(run_dir):
            targets.append((bundle.proposal_id, None, bundle))
    if which in ("all", "variants"):
        variants = _read_all(run_dir, "variants", lambda r: r["variant_id"])
        for record in variants:
            if record["applicability"] != "applied":
                continue
            targets.append(
                (
                    record["variant_id"],
                    record["perturbation_id"],
                    bundle_from_record(record["bundle"]),
                )
            )
    targets.sort(key=lambda t: t[0])
    return targets


def stage_review(run_dir: Path, cfg: Config, systems: Sequence[str], repeats: int,
                 effort: Optional[str] = None, targets: str = "all") -> Path:
    effort = effort or cfg.effort
    gateway = cfg.make_gateway()
    reviewer = cfg.reviewer.to_endpoint("reviewer")
    triples = _review_targets(run_dir, targets)
    records = []
    for system_name in systems:
        system = ReviewSystem(system_name)
        for target_id, perturbation_id, bundle in triples:
            for run_index in range(repeats):
                record = run_review(
                    system, bundle, gateway, reviewer,
                    effort=effort, seed=cfg.seed, run_index=run_index,
                    target=target_id, max_workers=cfg.concurrency,
                )
                doc = record_to_dict(record)
                doc["perturbation_id"] = perturbation_id
                records.append(doc)
    run = _manifest(run_dir, cfg)
    path = write_stream(run_dir, "reviews", records)
    run.record_stage("reviews", path, ledger=gateway.ledger.totals())
    run.save(run_dir)
    return path


def stage_judge(run_dir: Path, cfg: Config) -> Path:
    gateway = cfg.make_gateway()
    judges = cfg.judge_endpoints()
    reviews = _read_all(
        run_dir, "reviews", lambda r: (r["system"], r["target"], r["run_index"])
    )
    variants = {
        r["variant_id"]: r
        for r in _read_all(run_dir, "variants", lambda r: r["variant_id"])
        if r["applicability"] == "applied"
    }
    specs = {s.id: s for s in registry()}

    pairs = []
    for review in reviews:
        pid = review.get("perturbation_id")
        if not pid:
            continue  # unperturbed reviews are not judged
        variant = variants.get(review["target"])
        if variant is None:
            continue
        pairs.append((review, variant, specs[pid]))
    pairs.sort(key=lambda p: (p[0]["system"], p[0]["target"], p[0]["run_index"]))

    records = []
    for review, variant, spec in pairs:
        pair_id = f"{review['system']}:{review['target']}:r{review['run_index']}"
        panel = judge_pair(
            gateway, judges, pair_id,
            description=spec.judge_description,
            diff=variant["diff"]["text"],
            review_text=review["explanation"],
            seed=cfg.seed,
            max_workers=cfg.concurrency,
        )
        records.append(
            {
                "pair_id": pair_id,
                "system": review["system"],
                "target": review["target"],
                "run_index": review["run_index"],
                "perturbation_id": spec.id,
                "verdicts": [
                    {"judge_id": v.judge_id, "verdict": v.verdict.value, "explanation": v.explanation}
                    for v in panel.verdicts
                ],
                "majority": panel.majority.value,
                "detection_score": panel.detection_score,
                "tie_broken": panel.tie_broken,
            }
        )
    run = _manifest(run_dir, cfg)
    path = write_stream(run_dir, "verdicts", records)
    run.record_stage("verdicts", path, ledger=gateway.ledger.totals())
    run.save(run_dir)
    return path


def stage_claims(run_dir: Path, cfg: Config, reference: Optional[Path] = None) -> Path:
    gateway = cfg.make_gateway()
    reviewer = cfg.reviewer.to_endpoint("reviewer")
    embedder = cfg.embedder.to_endpoint("embedder")
    reviews = _read_all(
        run_dir, "reviews", lambda r: (r["system"], r["target"], r["run_index"])
    )

    all_claims: list[Claim] = []
    for review in sorted(reviews, key=lambda r: (r["system"], r["target"], r["run_index"])):
        if "::" in review["target"] or review["run_index"] != 0:
            continue  # align original-proposal reviews only, one run each
        claims = decompose_review(
            review["explanation"], gateway, reviewer,
            source=review["system"], proposal_id=review["target"],
            id_prefix=f"{review['system']}:{review['target']}",
        )
        all_claims.extend(claims)

    if reference is not None:
        for doc in read_stream(reference):
            claims = decompose_review(
                doc["text"], gateway, reviewer,
                source=doc.get("reviewer_id", "human"),
                proposal_id=doc["proposal_id"],
                id_prefix=f"{doc.get('reviewer_id', 'human')}:{doc['proposal_id']}",
            )
            all_claims.extend(claims)

    all_claims = [c.with_category(classify_category(c, gateway, reviewer)) for c in all_claims]
    assignment = cluster_claims(all_claims, gateway, embedder, cfg.cluster_merge)
    all_claims = [c.with_cluster(assignment[c.claim_id]) for c in all_claims]
    by_cluster: dict[str, list[Claim]] = defaultdict(list)
    for claim in all_claims:
        by_cluster[claim.cluster_id].append(claim)
    aspect_by_cluster = {
        cid: name_aspect(sorted(members, key=lambda c: c.claim_id), gateway, reviewer)
        for cid, members in sorted(by_cluster.items())
    }
    all_claims = [c.with_aspect(aspect_by_cluster[c.cluster_id]) for c in all_claims]
    all_claims = remerge(all_claims)

    sources = sorted({c.source for c in all_claims})
    match_records = []
    relations: dict[str, str] = {}
    report = None
    if len(sources) >= 2:
        human_sources = [s for s in sources if s not in {s.value for s in ReviewSystem}]
        set_b_source = human_sources[0] if human_sources else sources[1]
        set_a = [c for c in all_claims if c.source != set_b_source]
        set_b = [c for c in all_claims if c.source == set_b_source]
        matches = bidirectional_match(set_a, set_b, gateway, embedder, cfg.match_similarity)
        by_id = {c.claim_id: c for c in all_claims}
        labelled = {}
        for match in matches:
            if match.exclusive:
                continue
            claim = by_id[match.claim_id]
            candidates = [by_id[cid] for cid, _ in match.candidates]
            relation = label_relation(claim, candidates, gateway, reviewer)
            labelled[match.claim_id] = relation
            relations[match.claim_id] = relation.value
        report = exclusivity_report(all_claims, matches, labelled)
        match_records = [
            {
                "claim_id": m.claim_id,
                "direction": m.direction,
                "candidates": [list(c) for c in m.candidates],
                "relation": relations.get(m.claim_id),
                "threshold": m.threshold,
            }
            for m in matches
        ]

    run = _manifest(run_dir, cfg)
    path = write_stream(run_dir, "claims", [claim_to_dict(c) for c in all_claims])
    if match_records:
        write_stream(run_dir, "matches", match_records)
    if report is not None:
        write_stream(run_dir, "claim_report", [report.to_record()])
    run.record_stage("claims", path, ledger=gateway.ledger.totals())
    run.save(run_dir)
    return path


def stage_stats(run_dir: Path, cfg: Config) -> Path:
    reviews = _read_all(
        run_dir, "reviews", lambda r: (r["system"], r["target"], r["run_index"])
    )
    result: dict = {"reliability": reliability_report(reviews)}

    try:
        verdicts = _read_all(run_dir, "verdicts", lambda r: r["pair_id"])
    except FileNotFoundError:
        verdicts = []
    if verdicts:
        by_system: dict[str, list[float]] = defaultdict(list)
        for v in verdicts:
            by_system[v["system"]].append(float(v["detection_score"]))
        systems = sorted(by_system)
        if len(systems) >= 2:
            h, p = kruskal_wallis([by_system[s] for s in systems])
            result["kruskal_wallis"] = {"systems": systems, "H": h, "p": p}
        items = [
            [_VERDICT_CODE[j["verdict"]] for j in v["verdicts"]] for v in verdicts
        ]
        if items:
            result["judge_agreement"] = {
                "krippendorff_alpha_nominal": krippendorff_alpha(items, "nominal"),
                "krippendorff_alpha_ordinal": krippendorff_alpha(items, "ordinal"),
            }

    # score degradation against matching original reviews
    originals = {
        (r["system"], r["target"], r["run_index"], r["effort"]): r
        for r in reviews
        if "::" not in r["target"]
    }
    deltas: list[dict] = []
    for review in reviews:
        if "::" not in review["target"]:
            continue
        base = review["target"].split("::", 1)[0]
        key = (review["system"], base, review["run_index"], review["effort"])
        original = originals.get(key)
        if original is None:
            continue
        record = score_degradation(record_from_dict(original), record_from_dict(review))
        deltas.append(
            {
                "system": record.system,
                "original": record.original_target,
                "variant": record.perturbed_target,
                "perturbation_id": review.get("perturbation_id"),
                "delta_s": record.delta_s,
                "anomalous": record.anomalous,
            }
        )
    if deltas:
        per_system: dict[str, list[float]] = defaultdict(list)
        for d in deltas:
            per_system[d["system"]].append(d["delta_s"])
        result["degradation"] = {
            "records": deltas,
            "mean_delta_by_system": {
                s: sum(v) / len(v) for s, v in sorted(per_system.items())
            },
            "anomalous": sum(1 for d in deltas if d["anomalous"]),
        }

    run = _manifest(run_dir, cfg)
    path = write_stream(run_dir, "stats", [result])
    run.record_stage("stats", path)
    run.save(run_dir)
    return path


_VERDICT_CODE = {"C": 2.0, "P": 1.0, "I": 0.0}


def stage_report(run_dir: Path, cfg: Config, outdir: Optional[Path] = None) -> list[Path]:
    outdir = outdir or (run_dir / "report")
    outdir.mkdir(parents=True, exist_ok=True)
    outputs: list[Path] = []

    axis_by_spec = {s.id: s.axis.value for s in registry()}
    try:
        verdicts = _read_all(run_dir, "verdicts", lambda r: r["pair_id"])
    except FileNotFoundError:
        verdicts = []
    if verdicts:
        table = detection_report(verdicts, axis_by_spec)
        outputs.append(write_detection_csv(table, outdir / "detection.csv"))
        outputs.append(write_heatmap_csv(table, outdir / "heatmap.csv"))
        outputs.append(render_heatmap(table, outdir / "heatmap.png"))

    reviews = _read_all(
        run_dir, "reviews", lambda r: (r["system"], r["target"], r["run_index"])
    )
    rows = reliability_report(reviews)
    outputs.append(write_reliability_csv(rows, outdir / "reliability.csv"))
    figure = render_reliability_figure(rows, outdir / "variance_decomposition.png")
    if figure:
        outputs.append(figure)

    run = _manifest(run_dir, cfg)
    if run.stage_ledgers:
        outputs.append(write_run_summary_csv(run.stage_ledgers, outdir / "run_summary.csv"))
    return outputs


def stage_annotate_serve(run_dir: Path, cfg: Config, roster: Sequence[str],
                         host: str, port: int):  # pragma: no cover - thin wrapper
    import uvicorn

    from .service import AnnotationStore, build_tasks, create_app

    bundles = _load_bundles(run_dir)
    claims = _read_all(run_dir, "claims", lambda r: r["claim_id"])
    tasks, proposal_sections = build_tasks(bundles, claims)
    store = AnnotationStore(
        tasks=tasks,
        proposal_sections=proposal_sections,
        roster=list(roster),
        out_path=run_dir / "annotations.jsonl",
        seed=cfg.seed,
    )
    uvicorn.run(create_app(store), host=host, port=port)


# -- argparse ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grantprobe",
        description="Perturbation-based evaluation harness for LLM grant review.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, default=None, help="YAML config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a markdown corpus into bundle records")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--manifest", type=Path, default=None)
    p.add_argument("--run", type=Path, required=True, help="run directory")

    p = sub.add_parser("perturb", help="apply the perturbation registry")
    p.add_argument("--run", type=Path, required=True)
    p.add_argument("--specs", type=str, default=None, help="comma-separated spec ids")
    p.add_argument("--per-axis", type=int, default=None)

    p = sub.add_parser("review", help="run review systems over originals and variants")
    p.add_argument("--run", type=Path, required=True)
    p.add_argument(
        "--system",
        type=str,
        default="all",
        help="baseline|section_level|council|all or comma list",
    )
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--effort", type=str, default=None, choices=["low", "medium", "high"])
    p.add_argument("--targets", type=str, default="all", choices=["all", "originals", "variants"])

    p = sub.add_parser("judge", help="three-judge panel over perturbed reviews")
    p.add_argument("--run", type=Path, required=True)

    p = sub.add_parser("claims", help="decompose, label, cluster, and align claims")
    p.add_argument("--run", type=Path, required=True)
    p.add_argument("--reference", type=Path, default=None,
                   help="JSONL of human reviews: {reviewer_id, proposal_id, text}")

    p = sub.add_parser("stats", help="reliability and sensitivity statistics")
    p.add_argument("--run", type=Path, required=True)

    p = sub.add_parser("report", help="tables, heatmap matrix, and figures")
    p.add_argument("--run", type=Path, required=True)
    p.add_argument("--outdir", type=Path, default=None)

    p = sub.add_parser("annotate-serve", help="serve the annotation HTTP API")
    p.add_argument("--run", type=Path, required=True)
    p.add_argument("--roster", type=str, required=True, help="comma-separated annotator ids")
    p.add_argument("--host", type=str, default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = load_config(args.config)
    try:
        if args.command == "ingest":
            path = stage_ingest(args.corpus, args.manifest, args.run, cfg)
            print(f"wrote {path}")
        elif args.command == "perturb":
            spec_ids = args.specs.split(",") if args.specs else None
            path = stage_perturb(args.run, cfg, spec_ids, args.per_axis)
            print(f"wrote {path}")
        elif args.command == "review":
            systems = (
                [s.value for s in ReviewSystem]
                if args.system == "all"
                else args.system.split(",")
            )
            repeats = args.repeats if args.repeats is not None else cfg.repeats
            path = stage_review(args.run, cfg, systems, repeats, args.effort, args.targets)
            print(f"wrote {path}")
        elif args.command == "judge":
            path = stage_judge(args.run, cfg)
            print(f"wrote {path}")
        elif args.command == "claims":
            path = stage_claims(args.run, cfg, args.reference)
            print(f"wrote {path}")
        elif args.command == "stats":
            path = stage_stats(args.run, cfg)
            print(f"wrote {path}")
        elif args.command == "report":
            for path in stage_report(args.run, cfg, args.outdir):
                print(f"wrote {path}")
        elif args.command == "annotate-serve":
            stage_annotate_serve(
                args.run, cfg, args.roster.split(","), args.host, args.port
            )
    except (GrantProbeError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
