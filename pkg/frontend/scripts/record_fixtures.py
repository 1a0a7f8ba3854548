#!/usr/bin/env python3
"""Record API fixtures for the frontend contract tests.

Builds a small workspace whose chord graph has exactly 4 topics and 3
overlap edges (one edge sharing 7 documents), serves it through the real
HTTP app, and dumps selected responses under tests/fixtures/. Rerun after
changing any payload schema.
"""

from __future__ import annotations

import json
from pathlib import Path
from tempfile import TemporaryDirectory

import numpy as np
from fastapi.testclient import TestClient

from topicbench.ingest import Thread, save_threads
from topicbench.models.result import TopicInfo, TopicModelResult
from topicbench.workbench import Workspace
from topicbench.workbench.api import create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def build_model(doc_ids: list[str]) -> TopicModelResult:
    # Soft memberships: 7 docs share topics 0+1, 3 docs share 1+2, 2 docs
    # share 2+3, the rest sit in single topics.
    rows = []
    rows += [[0.45, 0.45, 0.05, 0.05]] * 7
    rows += [[0.05, 0.45, 0.45, 0.05]] * 3
    rows += [[0.05, 0.05, 0.45, 0.45]] * 2
    rows += [[0.91, 0.03, 0.03, 0.03]] * 4
    rows += [[0.03, 0.03, 0.03, 0.91]] * 4
    doc_topic = np.asarray(rows)
    keywords = {
        0: ["game", "player", "console", "quest"],
        1: ["doctor", "patient", "clinic", "care"],
        2: ["market", "stock", "trading", "budget"],
        3: ["fabric", "cotton", "thread", "dye"],
    }
    vocabulary = sorted({w for ws in keywords.values() for w in ws})
    topic_word = np.zeros((4, len(vocabulary)))
    for t, words in keywords.items():
        for rank, word in enumerate(words):
            topic_word[t, vocabulary.index(word)] = 1.0 - 0.1 * rank
    sizes = (doc_topic >= 0.1).sum(axis=0)
    return TopicModelResult(
        method="lda",
        topics=[
            TopicInfo(
                t,
                [(w, 1.0 - 0.1 * i) for i, w in enumerate(keywords[t])],
                int(sizes[t]),
            )
            for t in range(4)
        ],
        doc_ids=doc_ids,
        vocabulary=vocabulary,
        topic_word=topic_word,
        doc_topic=doc_topic,
        runtime_seconds=12.5,
        config={"num_topics": 4},
        seed=7,
    )


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    with TemporaryDirectory() as tmp:
        workspace = Workspace(Path(tmp) / "ws")
        doc_ids = [f"d{i:02d}" for i in range(20)]
        threads = [
            Thread(id=doc_id, text=f"sample discussion {i} about topic material", comment_count=i % 4)
            for i, doc_id in enumerate(doc_ids)
        ]
        threads_path = workspace.dataset_dir("fixture") / "threads.json"
        save_threads(threads, threads_path)
        workspace.register_artifact("fixture", "threads", threads_path)
        model = build_model(doc_ids)
        model_path = workspace.dataset_dir("fixture") / "model_lda_fixture.json"
        model.save(model_path)
        workspace.register_artifact("fixture", "model_lda", model_path)

        client = TestClient(create_app(workspace))
        recordings = {
            "datasets.json": client.get("/datasets"),
            "models.json": client.get("/datasets/fixture/models"),
            "topics.json": client.get("/models/fixture--lda/topics"),
            "chord.json": client.get("/models/fixture--lda/chord"),
            "documents.json": client.get("/models/fixture--lda/topics/0/documents?limit=5"),
            "desirability_words.json": client.get("/desirability-words"),
        }
        for name, response in recordings.items():
            assert response.status_code == 200, (name, response.status_code)
            (FIXTURE_DIR / name).write_text(json.dumps(response.json(), indent=1))

        ranking = {
            "dataset": "fixture",
            "reviewer": "p1",
            "ordering": ["lda"],
            "words": {"lda": ["Useful", "Organized"]},
            "notes": "fixture ranking",
        }
        post = client.post("/rankings", json=ranking)
        assert post.status_code == 201, post.text
        (FIXTURE_DIR / "ranking_post.json").write_text(json.dumps(post.json(), indent=1))
        listed = client.get("/rankings")
        (FIXTURE_DIR / "rankings.json").write_text(json.dumps(listed.json(), indent=1))

        chord = recordings["chord.json"].json()
        assert len(chord["nodes"]) == 4 and len(chord["edges"]) == 3, chord
        assert any(e["shared_documents"] == 7 for e in chord["edges"])
    print(f"fixtures written to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
