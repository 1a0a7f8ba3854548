"""Command-line entry points.

Every subcommand operates on a workspace directory. A single JSON config
file drives the stage commands; ``run`` executes the whole pipeline in one
go and is what most users want.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .. import ingest as ingest_mod
from .. import metrics as metrics_mod
from ..preprocess import PreprocessConfig, load_token_sets, preprocess_threads, save_token_sets
from .pipeline import _stage_select, _trainers, run_pipeline
from .report import ReportError, cross_dataset_tables, export_report, pairwise_csv, stats_battery
from .workspace import Workspace


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    return json.loads(Path(path).read_text())


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workspace", required=True, help="workspace directory")
    parser.add_argument("--config", help="run config JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topicbench",
        description="Topic-model comparison workbench for subreddit archives.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="merge RS_/RC_ dumps into threads")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--submissions", required=True, help="RS_* NDJSON (.json or .zst)")
    p.add_argument("--comments", required=True, help="RC_* NDJSON (.json or .zst)")

    p = sub.add_parser("preprocess", help="threads -> clean token sets")
    _add_common(p)
    p.add_argument("--dataset", required=True)

    p = sub.add_parser("train", help="train one model on a dataset")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--method", required=True, choices=["lda", "nmf", "embed"])

    p = sub.add_parser("select", help="pick a topic count (sweep or median)")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--strategy", required=True, choices=["sweep", "median"])
    p.add_argument("--method", default=None, help="restrict to one method")

    p = sub.add_parser("evaluate", help="compute metrics for trained models")
    _add_common(p)
    p.add_argument("--dataset", required=True)

    p = sub.add_parser("compare", help="run the statistical battery over saved metrics")
    _add_common(p)
    p.add_argument("--out", default=None, help="output JSON path (default: workspace)")

    p = sub.add_parser("report", help="export the report bundle for a run")
    _add_common(p)
    p.add_argument("--run", required=True, help="run id")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("serve", help="serve the exploration API (and built UI assets)")
    _add_common(p)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", default=None, help="directory of built UI assets (frontend/dist)")

    p = sub.add_parser("run", help="execute the full pipeline from a config")
    _add_common(p)
    return parser


def _state_for(workspace: Workspace, dataset: str, config: dict) -> dict:
    token_sets = load_token_sets(workspace.artifact_path(dataset, "tokensets"))
    try:
        embed_sets = load_token_sets(workspace.artifact_path(dataset, "tokensets_embed"))
    except Exception:
        embed_sets = token_sets
    return {"token_sets": token_sets, "embed_token_sets": embed_sets}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    workspace = Workspace(args.workspace)
    config = _load_config(args.config)

    if args.command == "run":
        manifest = run_pipeline(workspace, config)
        print(json.dumps({"run_id": manifest["run_id"], "status": manifest["status"]}))
        return 0 if manifest["status"] == "completed" else 1

    if args.command == "ingest":
        report = ingest_mod.ingest_dumps(args.submissions, args.comments)
        out = workspace.dataset_dir(args.dataset) / "threads.json"
        ingest_mod.save_threads(report.threads, out)
        workspace.register_artifact(args.dataset, "threads", out)
        print(
            f"{len(report.threads)} threads, {report.orphan_comments} orphan comments, "
            f"{report.malformed_lines} malformed lines -> {out}"
        )
        return 0

    if args.command == "preprocess":
        threads = ingest_mod.load_threads(workspace.artifact_path(args.dataset, "threads"))
        pp = PreprocessConfig.from_dict(config.get("preprocess", {}))
        token_sets = preprocess_threads(threads, pp)
        out = workspace.dataset_dir(args.dataset) / "tokensets.json"
        save_token_sets(token_sets, out)
        workspace.register_artifact(args.dataset, "tokensets", out)
        if pp.tfidf_filter_quantile is not None:
            embed_sets = preprocess_threads(threads, pp, embedding_path=True)
            out_embed = workspace.dataset_dir(args.dataset) / "tokensets_embed.json"
            save_token_sets(embed_sets, out_embed)
            workspace.register_artifact(args.dataset, "tokensets_embed", out_embed)
        print(f"{len(token_sets)} token sets -> {out}")
        return 0

    if args.command == "train":
        config.setdefault("dataset", args.dataset)
        state = _state_for(workspace, args.dataset, config)
        trainers = _trainers(config, state, args.dataset)
        overrides = config.get("methods", {}).get(args.method, {})
        result, elapsed = metrics_mod.timed(trainers[args.method], dict(overrides))
        result.runtime_seconds = elapsed
        out = workspace.dataset_dir(args.dataset) / f"model_{args.method}_{args.dataset}.json"
        result.save(out)
        workspace.register_artifact(args.dataset, f"model_{args.method}", out)
        print(f"{args.method}: {result.num_topics} topics in {elapsed:.2f}s -> {out}")
        return 0

    if args.command == "select":
        config.setdefault("dataset", args.dataset)
        selection = dict(config.get("selection", {}))
        selection["strategy"] = args.strategy
        if args.method:
            selection["methods"] = [args.method]
        config["selection"] = selection
        state = _state_for(workspace, args.dataset, config)
        detail = _stage_select(config, state)
        print(json.dumps(state.get("selection", {}), indent=1, default=str))
        print(detail)
        return 0

    if args.command == "evaluate":
        state = _state_for(workspace, args.dataset, config)
        reports = []
        for method in workspace.models_for(args.dataset):
            model = workspace.load_model(args.dataset, method)
            reports.append(metrics_mod.evaluate_model(model, state["token_sets"]))
        out = workspace.dataset_dir(args.dataset) / f"metrics_{args.dataset}.json"
        metrics_mod.save_reports(reports, out)
        workspace.register_artifact(args.dataset, "metrics", out)
        for r in reports:
            print(
                f"{r.method}: K={r.num_topics} coherence={r.coherence:.3f} "
                f"diversity={r.diversity:.3f} kl={r.kl_divergence:.3f} "
                f"perplexity={r.perplexity:.1f}"
            )
        return 0

    if args.command == "compare":
        tables = cross_dataset_tables(workspace)
        if tables is None or len(tables["rows"]) < 2:
            print("need metrics for at least two datasets; run `evaluate` first", file=sys.stderr)
            return 1
        battery = stats_battery(tables)
        out = Path(args.out) if args.out else workspace.root / "stats_report.json"
        out.write_text(json.dumps(battery, indent=1, sort_keys=True))
        out.with_suffix(".pairwise.csv").write_text(pairwise_csv(battery))
        print(f"stats battery over {len(tables['rows'])} datasets -> {out}")
        return 0

    if args.command == "report":
        try:
            written = export_report(workspace, args.run, args.out)
        except ReportError as exc:
            print(str(exc), file=sys.stderr)
            return 1
        print(json.dumps(written, indent=1))
        return 0

    if args.command == "serve":
        import uvicorn

        from .api import create_app

        uvicorn.run(
            create_app(workspace, ui_dir=args.ui), host=args.host, port=args.port
        )
        return 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
