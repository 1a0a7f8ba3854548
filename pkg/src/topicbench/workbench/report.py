"""Report bundle export and the cross-dataset comparison battery."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

from .. import metrics as metrics_mod
from .. import stats as stats_mod
from .chord import chord_graph
from .workspace import Workspace, WorkspaceError

METRIC_FIELDS = (
    ("num_topics", "number_of_topics", False),
    ("coherence", "topic_coherence", True),
    ("diversity", "topic_diversity", True),
    ("kl_divergence", "kl_divergence", False),
    ("runtime_seconds", "execution_time", False),
)

REQUIRED_STAGES = ("ingest", "preprocess", "train", "metrics", "stats")


class ReportError(RuntimeError):
    pass


def cross_dataset_tables(workspace: Workspace) -> dict[str, Any] | None:
    """Assemble datasets x methods tables for every metric from saved reports."""
    rows: list[str] = []
    per_metric: dict[str, list[list[float]]] = {name: [] for _, name, _ in METRIC_FIELDS}
    columns: list[str] | None = None
    for dataset in workspace.datasets():
        try:
            path = workspace.artifact_path(dataset, "metrics")
        except WorkspaceError:
            continue
        reports = metrics_mod.load_reports(path)
        if not reports:
            continue
        methods = [r.method for r in reports]
        if columns is None:
            columns = methods
        elif methods != columns:
            continue  # only stack datasets evaluated over the same methods
        rows.append(dataset)
        for attr, name, _ in METRIC_FIELDS:
            per_metric[name].append([float(getattr(r, attr)) for r in reports])
    if columns is None or not rows:
        return None
    return {"rows": rows, "columns": columns, "metrics": per_metric}


def stats_battery(tables: dict[str, Any]) -> dict[str, Any]:
    """ANOVA + Tukey per metric plus Friedman/Nemenyi over per-dataset ranks."""
    columns = tables["columns"]
    out: dict[str, Any] = {"columns": columns, "rows": tables["rows"], "metrics": {}}
    for attr, name, higher_better in METRIC_FIELDS:
        matrix = tables["metrics"][name]
        groups = [[row[j] for row in matrix] for j in range(len(columns))]
        entry: dict[str, Any] = {
            "describe": {
                col: stats_mod.describe(groups[j])._asdict()
                for j, col in enumerate(columns)
            }
        }
        try:
            entry["anova"] = stats_mod.one_way_anova(groups).to_dict()
            entry["tukey_hsd"] = stats_mod.tukey_hsd(groups, labels=columns).to_dict()
        except ValueError as exc:
            entry["error"] = str(exc)
        try:
            ranks = stats_mod.rank_table(matrix, higher_is_better=higher_better)
            entry["friedman"] = stats_mod.friedman(ranks).to_dict()
            entry["nemenyi"] = stats_mod.nemenyi(ranks, labels=columns).to_dict()
        except ValueError as exc:
            entry.setdefault("error", str(exc))
        out["metrics"][name] = entry
    return out


def pairwise_csv(battery: dict[str, Any]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["metric", "test", "pair", "mean_diff", "ci_low", "ci_high", "p_value", "significant"]
    )
    for metric, entry in sorted(battery.get("metrics", {}).items()):
        for test_name in ("tukey_hsd", "nemenyi"):
            block = entry.get(test_name)
            if not block or not block.get("pairwise"):
                continue
            for pair in block["pairwise"]:
                writer.writerow(
                    [
                        metric,
                        test_name,
                        "-".join(pair["pair"]),
                        f"{pair['mean_diff']:.6g}",
                        f"{pair['ci_low']:.6g}",
                        f"{pair['ci_high']:.6g}",
                        f"{pair['p_value']:.6g}",
                        pair["significant"],
                    ]
                )
    return buf.getvalue()


def export_report(workspace: Workspace, run_id: str, out_dir: str | Path) -> dict[str, Any]:
    """Emit metric CSVs, the stats battery, and one chord JSON per model."""
    if not run_id:
        raise ReportError("run not found: empty run id")
    manifest = workspace.read_manifest(run_id)
    completed = {
        s["name"] for s in manifest.get("stages", []) if s["status"] == "completed"
    }
    missing = [s for s in REQUIRED_STAGES if s not in completed]
    if manifest.get("status") != "completed" or missing:
        raise ReportError(
            f"run {run_id!r} is incomplete; missing stages: {missing or ['<failed>']}"
        )
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Any] = {"metric_tables": [], "chords": []}

    tables = cross_dataset_tables(workspace)
    if tables is None:
        raise ReportError("no metrics artifacts found in the workspace")
    for _, name, _ in METRIC_FIELDS:
        csv_text = metrics_mod.metric_table_csv(
            tables["rows"], tables["columns"], tables["metrics"][name]
        )
        path = out_dir / f"table_{name}.csv"
        path.write_text(csv_text)
        written["metric_tables"].append(str(path))

    battery = stats_battery(tables)
    stats_path = out_dir / "stats_report.json"
    stats_path.write_text(json.dumps(battery, indent=1, sort_keys=True))
    written["stats_report"] = str(stats_path)
    (out_dir / "stats_pairwise.csv").write_text(pairwise_csv(battery))

    dataset = manifest.get("dataset", "default")
    for method in workspace.models_for(dataset):
        model = workspace.load_model(dataset, method)
        graph = chord_graph(model)
        path = out_dir / f"chord_{method}_{dataset}.json"
        path.write_text(json.dumps(graph.to_dict(), indent=1, sort_keys=True))
        written["chords"].append(str(path))
    return written
