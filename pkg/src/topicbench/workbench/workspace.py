"""On-disk workspace: dataset registry, run manifests, ranking log.

Layout under the workspace root:

    registry.json            dataset name -> artifact paths
    runs/<run_id>.json       run manifest (config hash, stages, seeds)
    artifacts/<dataset>/     threads.json, tokensets.json, model_*.json, ...
    rankings.jsonl           append-only reviewer rankings
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..models.result import TopicModelResult

METHODS = ("lda", "nmf", "embed")
MAX_DESIRABILITY_WORDS = 5


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


class RankingValidationError(ValueError):
    def __init__(self, errors: dict[str, str]):
        super().__init__("; ".join(f"{k}: {v}" for k, v in errors.items()))
        self.errors = errors


@dataclass
class RankingRecord:
    dataset: str
    reviewer: str
    ordering: list[str]  # best-first permutation of the available methods
    words: dict[str, list[str]] = field(default_factory=dict)  # method -> <=5 picks
    notes: str = ""
    timestamp: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "dataset": self.dataset,
            "reviewer": self.reviewer,
            "ordering": self.ordering,
            "words": self.words,
            "notes": self.notes,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "RankingRecord":
        return cls(
            dataset=payload["dataset"],
            reviewer=payload["reviewer"],
            ordering=list(payload["ordering"]),
            words={k: list(v) for k, v in payload.get("words", {}).items()},
            notes=payload.get("notes", ""),
            timestamp=float(payload.get("timestamp", 0.0)),
        )


def validate_ranking(
    record: RankingRecord,
    available_methods: tuple[str, ...] = METHODS,
    word_list: list[str] | None = None,
) -> None:
    """Raise RankingValidationError carrying per-field messages."""
    errors: dict[str, str] = {}
    if not record.dataset:
        errors["dataset"] = "dataset is required"
    if not record.reviewer:
        errors["reviewer"] = "reviewer is required"
    if sorted(record.ordering) != sorted(available_methods):
        errors["ordering"] = (
            f"ordering must be a permutation of {sorted(available_methods)}"
        )
    for method, picks in record.words.items():
        if method not in available_methods:
            errors[f"words.{method}"] = "unknown method"
            continue
        if len(picks) > MAX_DESIRABILITY_WORDS:
            errors[f"words.{method}"] = (
                f"at most {MAX_DESIRABILITY_WORDS} words per method"
            )
        elif word_list is not None:
            allowed = {w.lower() for w in word_list}
            unknown = [w for w in picks if w.lower() not in allowed]
            if unknown:
                errors[f"words.{method}"] = f"words not in the configured list: {unknown}"
    if errors:
        raise RankingValidationError(errors)


class WorkspaceError(RuntimeError):
    pass


class Workspace:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "runs").mkdir(exist_ok=True)
        (self.root / "artifacts").mkdir(exist_ok=True)

    # -- registry -----------------------------------------------------------
    @property
    def _registry_path(self) -> Path:
        return self.root / "registry.json"

    def registry(self) -> dict[str, dict[str, str]]:
        if self._registry_path.is_file():
            return json.loads(self._registry_path.read_text())
        return {}

    def _write_registry(self, registry: dict) -> None:
        self._registry_path.write_text(json.dumps(registry, indent=1, sort_keys=True))

    def dataset_dir(self, dataset: str) -> Path:
        path = self.root / "artifacts" / dataset
        path.mkdir(parents=True, exist_ok=True)
        return path

    def register_artifact(self, dataset: str, kind: str, path: Path) -> None:
        registry = self.registry()
        entry = registry.setdefault(dataset, {})
        entry[kind] = str(path.relative_to(self.root))
        self._write_registry(registry)

    def artifact_path(self, dataset: str, kind: str) -> Path:
        registry = self.registry()
        try:
            rel = registry[dataset][kind]
        except KeyError as exc:
            raise WorkspaceError(f"no {kind!r} artifact for dataset {dataset!r}") from exc
        path = self.root / rel
        if not path.is_file():
            raise WorkspaceError(f"artifact missing on disk: {path}")
        return path

    def datasets(self) -> list[str]:
        return sorted(self.registry())

    def models_for(self, dataset: str) -> list[str]:
        registry = self.registry().get(dataset, {})
        return sorted(
            kind.removeprefix("model_") for kind in registry if kind.startswith("model_")
        )

    def load_model(self, dataset: str, method: str) -> TopicModelResult:
        return TopicModelResult.load(self.artifact_path(dataset, f"model_{method}"))

    # -- manifests ----------------------------------------------------------
    def manifest_path(self, run_id: str) -> Path:
        return self.root / "runs" / f"{run_id}.json"

    def write_manifest(self, manifest: dict) -> None:
        self.manifest_path(manifest["run_id"]).write_text(
            json.dumps(manifest, indent=1, sort_keys=True)
        )

    def read_manifest(self, run_id: str) -> dict:
        path = self.manifest_path(run_id)
        if not path.is_file():
            raise WorkspaceError(f"run not found: {run_id!r}")
        return json.loads(path.read_text())

    def runs(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "runs").glob("*.json"))

    # -- rankings -----------------------------------------------------------
    @property
    def _rankings_path(self) -> Path:
        return self.root / "rankings.jsonl"

    def append_ranking(
        self,
        record: RankingRecord,
        available_methods: tuple[str, ...] = METHODS,
        word_list: list[str] | None = None,
    ) -> RankingRecord:
        validate_ranking(record, available_methods, word_list)
        if record.timestamp == 0.0:
            record.timestamp = time.time()
        with open(self._rankings_path, "a", encoding="utf-8") as fh:
            fh.write(canonical_json(record.to_dict()) + "\n")
        return record

    def rankings(self) -> list[RankingRecord]:
        if not self._rankings_path.is_file():
            return []
        records = []
        for line in self._rankings_path.read_text().splitlines():
            if line.strip():
                records.append(RankingRecord.from_dict(json.loads(line)))
        return records
