"""HTTP API backing the exploration UI.

Read endpoints serve immutable completed artifacts; the single write
endpoint appends reviewer rankings. Model ids are "<dataset>--<method>"
as listed by ``GET /datasets/{d}/models``.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from fastapi import FastAPI, HTTPException, Query

from ..ingest import load_threads
from ..models.result import TopicModelResult
from .chord import DEFAULT_MEMBERSHIP_THRESHOLD, chord_graph
from .workspace import (
    RankingRecord,
    RankingValidationError,
    Workspace,
    WorkspaceError,
    validate_ranking,
)

DEFAULT_DOCUMENT_SAMPLE = 20


def load_desirability_words() -> list[str]:
    with resources.files("topicbench.data").joinpath("desirability_words.json").open() as fh:
        return json.load(fh)


def _split_model_id(model_id: str) -> tuple[str, str]:
    if "--" not in model_id:
        raise HTTPException(status_code=404, detail=f"unknown model id: {model_id!r}")
    dataset, method = model_id.rsplit("--", 1)
    return dataset, method


def create_app(
    workspace: Workspace,
    desirability_words: list[str] | None = None,
    ui_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="topicbench", version="0.1.0")
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    words = (
        desirability_words if desirability_words is not None else load_desirability_words()
    )

    def _load_model(model_id: str) -> TopicModelResult:
        dataset, method = _split_model_id(model_id)
        try:
            return workspace.load_model(dataset, method)
        except WorkspaceError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.get("/datasets")
    def list_datasets() -> list[dict[str, Any]]:
        return [
            {"name": name, "models": workspace.models_for(name)}
            for name in workspace.datasets()
        ]

    @app.get("/datasets/{dataset}/models")
    def list_models(dataset: str) -> list[dict[str, Any]]:
        if dataset not in workspace.datasets():
            raise HTTPException(status_code=404, detail=f"unknown dataset: {dataset!r}")
        out = []
        for method in workspace.models_for(dataset):
            model = workspace.load_model(dataset, method)
            out.append(
                {
                    "id": f"{dataset}--{method}",
                    "dataset": dataset,
                    "method": method,
                    "num_topics": model.num_topics,
                    "runtime_seconds": model.runtime_seconds,
                    "seed": model.seed,
                }
            )
        return out

    @app.get("/models/{model_id}/topics")
    def model_topics(model_id: str) -> list[dict[str, Any]]:
        model = _load_model(model_id)
        return [
            {
                "topic_id": t.topic_id,
                "keywords": [{"word": w, "weight": x} for w, x in t.keywords],
                "size": t.size,
            }
            for t in model.topics
        ]

    @app.get("/models/{model_id}/chord")
    def model_chord(
        model_id: str,
        threshold: float = Query(DEFAULT_MEMBERSHIP_THRESHOLD, ge=0.0, le=1.0),
    ) -> dict[str, Any]:
        model = _load_model(model_id)
        return chord_graph(model, membership_threshold=threshold).to_dict()

    @app.get("/models/{model_id}/topics/{topic_id}/documents")
    def topic_documents(
        model_id: str,
        topic_id: int,
        limit: int = Query(DEFAULT_DOCUMENT_SAMPLE, ge=1, le=500),
    ) -> list[dict[str, Any]]:
        dataset, _ = _split_model_id(model_id)
        model = _load_model(model_id)
        if topic_id not in {t.topic_id for t in model.topics}:
            raise HTTPException(status_code=404, detail=f"unknown topic: {topic_id}")
        try:
            threads = {t.id: t for t in load_threads(workspace.artifact_path(dataset, "threads"))}
        except WorkspaceError:
            threads = {}
        memberships = model.memberships()
        sample = []
        for doc_id, topics in zip(model.doc_ids, memberships):
            if topic_id in topics:
                thread = threads.get(doc_id)
                sample.append(
                    {
                        "id": doc_id,
                        "text": thread.text[:2000] if thread else "",
                        "comment_count": thread.comment_count if thread else 0,
                    }
                )
                if len(sample) >= limit:
                    break
        return sample

    @app.get("/rankings")
    def list_rankings() -> list[dict[str, Any]]:
        return [r.to_dict() for r in workspace.rankings()]

    @app.post("/rankings", status_code=201)
    def post_ranking(payload: dict[str, Any]) -> dict[str, Any]:
        try:
            record = RankingRecord.from_dict(payload)
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(
                status_code=422, detail={"errors": {"payload": f"malformed: {exc}"}}
            ) from exc
        dataset_models = workspace.models_for(record.dataset)
        available = tuple(dataset_models) if dataset_models else ("lda", "nmf", "embed")
        try:
            validate_ranking(record, available, words)
        except RankingValidationError as exc:
            raise HTTPException(status_code=422, detail={"errors": exc.errors}) from exc
        stored = workspace.append_ranking(record, available, words)
        return stored.to_dict()

    @app.get("/desirability-words")
    def desirability() -> list[str]:
        return words

    return app
