"""End-to-end run orchestration.

One declarative JSON config describes a run: dataset name, input artifacts,
preprocessing, optional topic-count selection, the methods to train, and
metric settings. Artifacts are persisted per stage and addressed through the
workspace registry; the run manifest records the config hash, seeds, and
stage outcomes. Re-running a config whose manifest is already complete
reuses the persisted artifacts untouched, which keeps reruns bit-identical.
"""

from __future__ import annotations

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from .. import ingest as ingest_mod
from .. import metrics as metrics_mod
from ..embedders import get_embedder
from ..models import (
    EmbedClusterConfig,
    LdaConfig,
    NmfConfig,
    bow_corpus,
    build_vocabulary,
    choose_topics_by_coherence,
    choose_topics_median,
    tfidf_matrix,
    train_embed_cluster,
    train_lda,
    train_nmf,
)
from ..preprocess import PreprocessConfig, preprocess_threads, save_token_sets
from .workspace import Workspace, config_hash

log = logging.getLogger(__name__)

STAGES = ("ingest", "preprocess", "select", "train", "metrics", "stats")


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


def run_pipeline(workspace: Workspace, config: dict[str, Any]) -> dict:
    """Execute the full pipeline described by ``config``; returns the manifest."""
    digest = config_hash(config)
    run_id = digest[:12]
    try:
        manifest = workspace.read_manifest(run_id)
        if manifest.get("status") == "completed":
            log.info("run %s already completed; reusing artifacts", run_id)
            return manifest
    except Exception:
        pass

    manifest = {
        "run_id": run_id,
        "config_hash": digest,
        "config": config,
        "dataset": config.get("dataset", "default"),
        "created_at": _utcnow(),
        "stages": [],
        "artifacts": {},
        "seeds": {},
        "status": "running",
    }

    state: dict[str, Any] = {}
    try:
        for stage in STAGES:
            detail = _run_stage(stage, workspace, config, manifest, state)
            manifest["stages"].append(
                {"name": stage, "status": "completed", "detail": detail}
            )
        manifest["status"] = "completed"
    except Exception as exc:
        stage = exc.stage if isinstance(exc, PipelineError) else "unknown"
        log.error("run %s failed at stage %s: %s", run_id, stage, exc)
        manifest["stages"].append({"name": stage, "status": "failed", "detail": str(exc)})
        manifest["status"] = "failed"
    manifest["finished_at"] = _utcnow()
    workspace.write_manifest(manifest)
    return manifest


def _register(workspace: Workspace, manifest: dict, dataset: str, kind: str, path: Path):
    workspace.register_artifact(dataset, kind, path)
    manifest["artifacts"][kind] = str(path.relative_to(workspace.root))


def _run_stage(stage, workspace, config, manifest, state) -> str:
    dataset = config.get("dataset", "default")
    try:
        if stage == "ingest":
            return _stage_ingest(workspace, config, manifest, state, dataset)
        if stage == "preprocess":
            return _stage_preprocess(workspace, config, manifest, state, dataset)
        if stage == "select":
            return _stage_select(config, state)
        if stage == "train":
            return _stage_train(workspace, config, manifest, state, dataset)
        if stage == "metrics":
            return _stage_metrics(workspace, config, manifest, state, dataset)
        if stage == "stats":
            return _stage_stats(workspace, manifest, dataset)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(stage, str(exc)) from exc
    raise PipelineError(stage, "unknown stage")


def _stage_ingest(workspace, config, manifest, state, dataset) -> str:
    source = config.get("input", {})
    if "threads" in source:
        path = Path(source["threads"])
        if not path.is_file():
            raise PipelineError("ingest", f"threads artifact not found: {path}")
        threads = ingest_mod.load_threads(path)
        detail = f"loaded {len(threads)} threads"
    elif "submissions" in source and "comments" in source:
        report = ingest_mod.ingest_dumps(source["submissions"], source["comments"])
        threads = report.threads
        detail = (
            f"merged {len(threads)} threads, {report.orphan_comments} orphans, "
            f"{report.malformed_lines} malformed lines"
        )
    else:
        raise PipelineError("ingest", "config.input needs 'threads' or 'submissions'+'comments'")
    out = workspace.dataset_dir(dataset) / "threads.json"
    ingest_mod.save_threads(threads, out)
    _register(workspace, manifest, dataset, "threads", out)
    state["threads"] = threads
    return detail


def _stage_preprocess(workspace, config, manifest, state, dataset) -> str:
    pp_config = PreprocessConfig.from_dict(config.get("preprocess", {}))
    token_sets = preprocess_threads(state["threads"], pp_config)
    embed_token_sets = (
        preprocess_threads(state["threads"], pp_config, embedding_path=True)
        if pp_config.tfidf_filter_quantile is not None
        else token_sets
    )
    out = workspace.dataset_dir(dataset) / "tokensets.json"
    save_token_sets(token_sets, out)
    _register(workspace, manifest, dataset, "tokensets", out)
    if embed_token_sets is not token_sets:
        out_embed = workspace.dataset_dir(dataset) / "tokensets_embed.json"
        save_token_sets(embed_token_sets, out_embed)
        _register(workspace, manifest, dataset, "tokensets_embed", out_embed)
    state["token_sets"] = token_sets
    state["embed_token_sets"] = embed_token_sets
    return f"{len(token_sets)} token sets"


def _trainers(config, state, dataset):
    """Build per-method closures over the prepared corpus representations."""
    seed = int(config.get("seed", 0))
    token_lists = [ts.tokens for ts in state["token_sets"]]
    doc_ids = [ts.thread_id for ts in state["token_sets"]]

    def lda_trainer(overrides: dict):
        vocab = build_vocabulary(token_lists)
        corpus = bow_corpus(token_lists, vocab)
        cfg = LdaConfig(**{"seed": seed, **overrides})
        return train_lda(corpus, vocab, cfg, doc_ids=doc_ids)

    def nmf_trainer(overrides: dict):
        weights, vocab = tfidf_matrix(token_lists)
        cfg = NmfConfig(**{"seed": seed, **overrides})
        return train_nmf(weights, list(vocab.id_to_token), cfg, doc_ids=doc_ids)

    def embed_trainer(overrides: dict):
        texts = [" ".join(ts.tokens) for ts in state["embed_token_sets"]]
        ids = [ts.thread_id for ts in state["embed_token_sets"]]
        cfg = EmbedClusterConfig(**{"seed": seed, **overrides})
        embedder = get_embedder(config.get("embedder"))
        return train_embed_cluster(texts, cfg, embedder, doc_ids=ids)

    return {"lda": lda_trainer, "nmf": nmf_trainer, "embed": embed_trainer}


def _stage_select(config, state) -> str:
    selection = config.get("selection")
    if not selection:
        return "no selection configured"
    strategy = selection.get("strategy")
    methods = dict(config.get("methods", {}))
    dataset = config.get("dataset", "default")
    trainers = _trainers(config, state, dataset)
    notes = []
    if strategy == "sweep":
        grid = selection.get("grid", list(range(5, 51, 5)))
        for method in selection.get("methods", ["lda", "nmf"]):
            if method not in methods:
                continue
            trainer = trainers[method]
            base = dict(methods[method])

            def at_k(k, _trainer=trainer, _base=base):
                return _trainer({**_base, "num_topics": k})

            sweep = choose_topics_by_coherence(at_k, state["token_sets"], grid=grid)
            methods[method]["num_topics"] = sweep.selected_k
            state.setdefault("selection", {})[method] = {
                "strategy": "sweep",
                "selected_k": sweep.selected_k,
                "curve": sweep.curve,
            }
            notes.append(f"{method}: K={sweep.selected_k}")
    elif strategy == "median":
        runs = int(selection.get("runs", 11))
        for method in selection.get("methods", ["embed"]):
            if method not in methods:
                continue
            trainer = trainers[method]
            base = dict(methods[method])

            def at_seed(s, _trainer=trainer, _base=base):
                return _trainer({**_base, "seed": s})

            med = choose_topics_median(at_seed, runs=runs, base_seed=int(config.get("seed", 0)))
            methods[method]["nr_topics"] = med.median_topics
            state.setdefault("selection", {})[method] = {
                "strategy": "median",
                "median_topics": med.median_topics,
                "mean": med.mean,
                "std": med.std,
                "counts": med.counts,
            }
            notes.append(f"{method}: median={med.median_topics}")
    else:
        raise PipelineError("select", f"unknown selection strategy: {strategy!r}")
    state["methods_override"] = methods
    return "; ".join(notes) if notes else "nothing selected"


def _stage_train(workspace, config, manifest, state, dataset) -> str:
    methods = state.get("methods_override", config.get("methods", {}))
    if not methods:
        raise PipelineError("train", "no methods configured")
    trainers = _trainers(config, state, dataset)
    results = {}
    for method, overrides in methods.items():
        if method not in trainers:
            raise PipelineError("train", f"unknown method {method!r}")
        result, elapsed = metrics_mod.timed(trainers[method], dict(overrides))
        result.runtime_seconds = elapsed
        out = workspace.dataset_dir(dataset) / f"model_{method}_{dataset}.json"
        result.save(out)
        _register(workspace, manifest, dataset, f"model_{method}", out)
        manifest["seeds"][method] = result.seed
        results[method] = result
    state["results"] = results
    return f"trained {sorted(results)}"


def _stage_metrics(workspace, config, manifest, state, dataset) -> str:
    settings = config.get("metrics", {})
    reports = [
        metrics_mod.evaluate_model(
            result,
            state["token_sets"],
            top_k=int(settings.get("top_k", 10)),
            window=int(settings.get("window", metrics_mod.DEFAULT_WINDOW)),
        )
        for _, result in sorted(state["results"].items())
    ]
    out = workspace.dataset_dir(dataset) / f"metrics_{dataset}.json"
    metrics_mod.save_reports(reports, out)
    _register(workspace, manifest, dataset, "metrics", out)
    state["reports"] = reports
    return f"{len(reports)} reports"


def _stage_stats(workspace, manifest, dataset) -> str:
    from .report import cross_dataset_tables, stats_battery

    tables = cross_dataset_tables(workspace)
    if tables is None or len(tables["rows"]) < 2:
        detail = "insufficient datasets for the comparison battery (need >= 2)"
        manifest.setdefault("notes", []).append(detail)
        return detail
    battery = stats_battery(tables)
    out = workspace.root / "stats_report.json"
    out.write_text(_dumps(battery))
    manifest["artifacts"]["stats_report"] = str(out.relative_to(workspace.root))
    return f"battery over {len(tables['rows'])} datasets"


def _dumps(payload) -> str:
    import json

    return json.dumps(payload, indent=1, sort_keys=True)
