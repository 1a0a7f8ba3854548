"""Chord graph: topics as nodes, shared-document counts as edges.

A document belongs to a topic when its membership weight reaches the
threshold (distributional models) or when it carries that hard label
(clustering models; the outlier label never becomes a node). An edge
(i, j, w) with i < j counts the documents belonging to both topics, so its
weight can never exceed the smaller node size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from ..models.result import TopicModelResult

DEFAULT_MEMBERSHIP_THRESHOLD = 0.1


@dataclass
class ChordNode:
    topic_id: int
    top_words: list[str]
    size: int

    def to_dict(self) -> dict[str, Any]:
        return {"topic_id": self.topic_id, "top_words": self.top_words, "size": self.size}


@dataclass
class ChordEdge:
    source: int
    target: int
    shared_documents: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "target": self.target,
            "shared_documents": self.shared_documents,
        }


@dataclass
class ChordGraph:
    nodes: list[ChordNode] = field(default_factory=list)
    edges: list[ChordEdge] = field(default_factory=list)
    membership_threshold: float = DEFAULT_MEMBERSHIP_THRESHOLD

    def to_dict(self) -> dict[str, Any]:
        return {
            "nodes": [n.to_dict() for n in self.nodes],
            "edges": [e.to_dict() for e in self.edges],
            "membership_threshold": self.membership_threshold,
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "ChordGraph":
        return cls(
            nodes=[ChordNode(**n) for n in payload["nodes"]],
            edges=[ChordEdge(**e) for e in payload["edges"]],
            membership_threshold=payload.get(
                "membership_threshold", DEFAULT_MEMBERSHIP_THRESHOLD
            ),
        )


def chord_graph(
    model: TopicModelResult,
    membership_threshold: float = DEFAULT_MEMBERSHIP_THRESHOLD,
    top_words: int = 10,
) -> ChordGraph:
    memberships = model.memberships(membership_threshold)
    sizes: dict[int, int] = {t.topic_id: 0 for t in model.topics}
    shared: dict[tuple[int, int], int] = {}
    for topics in memberships:
        for t in topics:
            sizes[t] += 1
        for a, b in combinations(sorted(topics), 2):
            shared[(a, b)] = shared.get((a, b), 0) + 1
    nodes = [
        ChordNode(
            topic_id=t.topic_id,
            top_words=[w for w, _ in t.keywords[:top_words]],
            size=sizes[t.topic_id],
        )
        for t in model.topics
    ]
    edges = [
        ChordEdge(source=a, target=b, shared_documents=count)
        for (a, b), count in sorted(shared.items())
        if count > 0
    ]
    return ChordGraph(nodes=nodes, edges=edges, membership_threshold=membership_threshold)
