"""Embedding-based topic extraction.

Pipeline: embed documents -> reduce to a few components -> density-cluster
(HDBSCAN, excess-of-mass, outliers labeled -1) -> class-based TF-IDF keywords
per cluster -> iterative merge of clusters whose keyword vectors exceed a
cosine-similarity threshold ("auto" topic count), repeated to a fixpoint.

Reduction backends are pluggable. "svd" (truncated SVD on L2-normalized
vectors, honoring the cosine geometry) is the deterministic default;
"spectral" uses a nearest-neighbor graph embedding honoring ``n_neighbors``;
"umap" binds umap-learn when that package is installed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..embedders import Embedder
from .ctfidf import compute_ctfidf
from .result import (
    METHOD_EMBED,
    OUTLIER_LABEL,
    TopicInfo,
    TopicModelResult,
    top_keywords,
)


@dataclass
class EmbedClusterConfig:
    n_neighbors: int = 15
    n_components: int = 5
    min_dist: float = 0.0
    reduction_metric: str = "cosine"
    min_cluster_size: int = 15
    cluster_metric: str = "euclidean"
    selection: str = "eom"
    nr_topics: str | int | None = "auto"
    top_k_words: int = 10
    merge_threshold: float = 0.85
    reducer: str = "svd"
    seed: int = 0

    def __post_init__(self):
        if self.min_cluster_size < 2:
            raise ValueError("min_cluster_size must be >= 2")

    def to_dict(self) -> dict:
        return {
            "n_neighbors": self.n_neighbors,
            "n_components": self.n_components,
            "min_dist": self.min_dist,
            "reduction_metric": self.reduction_metric,
            "min_cluster_size": self.min_cluster_size,
            "cluster_metric": self.cluster_metric,
            "selection": self.selection,
            "nr_topics": self.nr_topics,
            "top_k_words": self.top_k_words,
            "merge_threshold": self.merge_threshold,
            "reducer": self.reducer,
            "seed": self.seed,
        }


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)


def reduce_embeddings(embeddings: np.ndarray, config: EmbedClusterConfig) -> np.ndarray:
    n_docs, dim = embeddings.shape
    if config.n_components >= dim:
        raise ValueError("n_components must be below the embedding dimension")
    if config.reduction_metric == "cosine":
        embeddings = _normalize_rows(embeddings)
    n_components = min(config.n_components, max(1, n_docs - 1))
    if config.reducer == "svd":
        from sklearn.decomposition import TruncatedSVD

        svd = TruncatedSVD(
            n_components=n_components, random_state=config.seed, algorithm="randomized"
        )
        return svd.fit_transform(embeddings)
    if config.reducer == "spectral":
        from sklearn.manifold import SpectralEmbedding

        spectral = SpectralEmbedding(
            n_components=n_components,
            n_neighbors=min(config.n_neighbors, n_docs - 1),
            affinity="nearest_neighbors",
            random_state=config.seed,
        )
        return spectral.fit_transform(embeddings)
    if config.reducer == "umap":
        try:
            from umap import UMAP
        except ImportError as exc:
            raise RuntimeError(
                "umap-learn is not installed; choose the 'svd' or 'spectral' reducer"
            ) from exc
        return UMAP(
            n_neighbors=config.n_neighbors,
            n_components=n_components,
            min_dist=config.min_dist,
            metric=config.reduction_metric,
            random_state=config.seed,
        ).fit_transform(embeddings)
    raise ValueError(f"unknown reducer: {config.reducer!r}")


def _cluster(reduced: np.ndarray, config: EmbedClusterConfig):
    from sklearn.cluster import HDBSCAN

    clusterer = HDBSCAN(
        min_cluster_size=config.min_cluster_size,
        metric=config.cluster_metric,
        cluster_selection_method=config.selection,
    )
    labels = clusterer.fit_predict(reduced)
    return labels.astype(np.int64), clusterer.probabilities_.astype(np.float64)


def _class_counts(
    token_lists: list[list[str]], labels: np.ndarray, vocabulary: list[str]
) -> np.ndarray:
    index = {t: i for i, t in enumerate(vocabulary)}
    classes = sorted(set(int(c) for c in labels if c != OUTLIER_LABEL))
    counts = np.zeros((len(classes), len(vocabulary)), dtype=np.float64)
    pos = {c: i for i, c in enumerate(classes)}
    for tokens, label in zip(token_lists, labels):
        if label == OUTLIER_LABEL:
            continue
        row = pos[int(label)]
        for token, n in Counter(tokens).items():
            counts[row, index[token]] += n
    return counts


def _merge_pass(counts: np.ndarray, threshold: float) -> tuple[int, int] | None:
    """Most-similar cluster pair at or above threshold, or None."""
    if counts.shape[0] < 2:
        return None
    weights = _normalize_rows(compute_ctfidf(counts))
    sim = weights @ weights.T
    np.fill_diagonal(sim, -np.inf)
    i, j = np.unravel_index(int(np.argmax(sim)), sim.shape)
    if sim[i, j] >= threshold:
        return (min(i, j), max(i, j))
    return None


def train_embed_cluster(
    texts: Sequence[str],
    config: EmbedClusterConfig,
    embedder: Embedder,
    doc_ids: list[str] | None = None,
) -> TopicModelResult:
    if len(texts) == 0:
        raise ValueError("texts must be non-empty")
    ids = list(doc_ids) if doc_ids is not None else [str(i) for i in range(len(texts))]

    token_lists = [text.lower().split() for text in texts]
    vocabulary = sorted({t for tokens in token_lists for t in tokens})

    if len(texts) < config.min_cluster_size:
        # Too few documents to form any cluster: everything is an outlier.
        return TopicModelResult(
            method=METHOD_EMBED,
            topics=[],
            doc_ids=ids,
            vocabulary=vocabulary,
            topic_word=np.zeros((0, len(vocabulary))),
            doc_labels=np.full(len(texts), OUTLIER_LABEL, dtype=np.int64),
            doc_probabilities=np.zeros(len(texts)),
            config=config.to_dict(),
            seed=config.seed,
        )

    embeddings = np.asarray(embedder.embed(texts), dtype=np.float64)
    reduced = reduce_embeddings(embeddings, config)
    labels, probabilities = _cluster(reduced, config)

    merges = 0
    if labels.max(initial=OUTLIER_LABEL) >= 0:
        counts = _class_counts(token_lists, labels, vocabulary)
        classes = sorted(set(int(c) for c in labels if c != OUTLIER_LABEL))
        if config.nr_topics == "auto":
            while True:
                pair = _merge_pass(counts, config.merge_threshold)
                if pair is None:
                    break
                counts, classes = _apply_merge(counts, classes, labels, pair)
                merges += 1
        elif isinstance(config.nr_topics, int):
            while counts.shape[0] > max(1, config.nr_topics):
                pair = _merge_pass(counts, -np.inf)
                if pair is None:
                    break
                counts, classes = _apply_merge(counts, classes, labels, pair)
                merges += 1
    else:
        counts = np.zeros((0, len(vocabulary)))
        classes = []

    # Renumber topics by descending size, ties by current label.
    sizes = {c: int(np.sum(labels == c)) for c in classes}
    ordered = sorted(classes, key=lambda c: (-sizes[c], c))
    remap = {c: rank for rank, c in enumerate(ordered)}
    final_labels = np.array(
        [remap.get(int(c), OUTLIER_LABEL) for c in labels], dtype=np.int64
    )
    if counts.shape[0]:
        counts = counts[[classes.index(c) for c in ordered]]
        weights = compute_ctfidf(counts)
    else:
        weights = np.zeros((0, len(vocabulary)))

    topics = [
        TopicInfo(
            topic_id=rank,
            keywords=top_keywords(weights[rank], vocabulary, config.top_k_words),
            size=sizes[c],
        )
        for rank, c in enumerate(ordered)
    ]
    return TopicModelResult(
        method=METHOD_EMBED,
        topics=topics,
        doc_ids=ids,
        vocabulary=vocabulary,
        topic_word=weights,
        doc_labels=final_labels,
        doc_probabilities=probabilities,
        config=config.to_dict(),
        seed=config.seed,
        diagnostics={"merged_pairs": merges, "embedder": embedder.name},
    )


def _apply_merge(
    counts: np.ndarray, classes: list[int], labels: np.ndarray, pair: tuple[int, int]
) -> tuple[np.ndarray, list[int]]:
    """Fold cluster row j into row i (in-place on labels), dropping row j."""
    i, j = pair
    keep, drop = classes[i], classes[j]
    counts[i] += counts[j]
    counts = np.delete(counts, j, axis=0)
    labels[labels == drop] = keep
    return counts, [c for c in classes if c != drop]
