"""Trained-model artifact: topics, memberships, and serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

METHOD_LDA = "lda"
METHOD_NMF = "nmf"
METHOD_EMBED = "embed"

OUTLIER_LABEL = -1


@dataclass
class TopicInfo:
    topic_id: int
    keywords: list[tuple[str, float]]  # sorted by descending weight
    size: int


@dataclass
class TopicModelResult:
    """Everything a trained model leaves behind.

    ``doc_topic`` holds per-document topic distributions for the
    distributional methods; the embedding path instead fills ``doc_labels``
    (hard assignment, -1 = outlier) and ``doc_probabilities`` (membership
    strength). ``topic_word`` keeps the full topics x vocabulary weight
    matrix so metrics can reconstruct word distributions.
    """

    method: str
    topics: list[TopicInfo]
    doc_ids: list[str]
    vocabulary: list[str]
    topic_word: np.ndarray
    doc_topic: np.ndarray | None = None
    doc_labels: np.ndarray | None = None
    doc_probabilities: np.ndarray | None = None
    runtime_seconds: float = 0.0
    config: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def num_topics(self) -> int:
        return len(self.topics)

    def keyword_lists(self) -> list[list[str]]:
        return [[word for word, _ in t.keywords] for t in self.topics]

    def memberships(self, threshold: float = 0.1) -> list[list[int]]:
        """Topic ids each document belongs to.

        Distributional models: membership iff weight >= threshold.
        Hard-labeled models: the label, outliers excluded.
        """
        out: list[list[int]] = []
        if self.doc_topic is not None:
            topic_ids = [t.topic_id for t in self.topics]
            for row in self.doc_topic:
                out.append([topic_ids[k] for k in np.nonzero(row >= threshold)[0]])
        elif self.doc_labels is not None:
            for label in self.doc_labels:
                out.append([] if label == OUTLIER_LABEL else [int(label)])
        else:
            out = [[] for _ in self.doc_ids]
        return out

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "method": self.method,
            "topics": [
                {
                    "topic_id": t.topic_id,
                    "keywords": [[w, float(x)] for w, x in t.keywords],
                    "size": t.size,
                }
                for t in self.topics
            ],
            "doc_ids": list(self.doc_ids),
            "vocabulary": list(self.vocabulary),
            "topic_word": self.topic_word.tolist(),
            "runtime_seconds": float(self.runtime_seconds),
            "config": self.config,
            "seed": self.seed,
            "diagnostics": self.diagnostics,
        }
        payload["doc_topic"] = None if self.doc_topic is None else self.doc_topic.tolist()
        payload["doc_labels"] = (
            None if self.doc_labels is None else [int(x) for x in self.doc_labels]
        )
        payload["doc_probabilities"] = (
            None
            if self.doc_probabilities is None
            else [float(x) for x in self.doc_probabilities]
        )
        return payload

    def to_json(self) -> str:
        # Canonical form so identical models serialize byte-identically.
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "TopicModelResult":
        vocab = payload["vocabulary"]
        n_topics = len(payload["topics"])
        topic_word = np.asarray(payload["topic_word"], dtype=np.float64)
        if topic_word.size == 0:
            topic_word = topic_word.reshape(n_topics, len(vocab))
        return cls(
            method=payload["method"],
            topics=[
                TopicInfo(
                    topic_id=t["topic_id"],
                    keywords=[(w, float(x)) for w, x in t["keywords"]],
                    size=t["size"],
                )
                for t in payload["topics"]
            ],
            doc_ids=list(payload["doc_ids"]),
            vocabulary=list(vocab),
            topic_word=topic_word,
            doc_topic=(
                None
                if payload.get("doc_topic") is None
                else np.asarray(payload["doc_topic"], dtype=np.float64)
            ),
            doc_labels=(
                None
                if payload.get("doc_labels") is None
                else np.asarray(payload["doc_labels"], dtype=np.int64)
            ),
            doc_probabilities=(
                None
                if payload.get("doc_probabilities") is None
                else np.asarray(payload["doc_probabilities"], dtype=np.float64)
            ),
            runtime_seconds=float(payload.get("runtime_seconds", 0.0)),
            config=payload.get("config", {}),
            seed=int(payload.get("seed", 0)),
            diagnostics=payload.get("diagnostics", {}),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> "TopicModelResult":
        return cls.from_dict(json.loads(Path(path).read_text()))


def top_keywords(
    weights: np.ndarray, vocabulary: list[str], top_k: int
) -> list[tuple[str, float]]:
    """Highest-weight words of one topic row, ties broken by token id."""
    take = min(top_k, len(vocabulary))
    order = np.lexsort((np.arange(weights.shape[0]), -weights))[:take]
    return [(vocabulary[i], float(weights[i])) for i in order]
