"""Non-negative factorization of a TF-IDF matrix via multiplicative updates.

Minimizes the Frobenius reconstruction error ||V - WH||_F with the classic
Lee-Seung update pair, seeded uniform nonnegative initialization, and an
objective trace recorded every iteration (the objective is provably
non-increasing under these updates).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .result import METHOD_NMF, TopicInfo, TopicModelResult, top_keywords

_EPS = 1e-12


class NmfInputError(ValueError):
    pass


@dataclass
class NmfConfig:
    num_topics: int
    max_iter: int = 200
    tol: float = 1e-4
    seed: int = 0
    top_k_words: int = 10

    def __post_init__(self):
        if self.num_topics < 1:
            raise NmfInputError("num_topics must be >= 1")
        if self.tol <= 0:
            raise NmfInputError("tol must be > 0")

    def to_dict(self) -> dict:
        return {
            "num_topics": self.num_topics,
            "max_iter": self.max_iter,
            "tol": self.tol,
            "seed": self.seed,
            "top_k_words": self.top_k_words,
        }


def _frobenius(matrix, left: np.ndarray, right: np.ndarray) -> float:
    """||V - WH||_F computed without materializing WH for sparse V."""
    if sp.issparse(matrix):
        v_sq = float(matrix.multiply(matrix).sum())
        cross = float(np.sum((matrix @ right.T) * left))
        wh_sq = float(np.sum((left.T @ left) * (right @ right.T)))
        return float(np.sqrt(max(v_sq - 2.0 * cross + wh_sq, 0.0)))
    return float(np.linalg.norm(matrix - left @ right))


def train_nmf(
    matrix,
    vocabulary: list[str],
    config: NmfConfig,
    doc_ids: list[str] | None = None,
) -> TopicModelResult:
    """Factorize a nonnegative docs x vocab matrix into K topics."""
    dense = not sp.issparse(matrix)
    if dense:
        matrix = np.asarray(matrix, dtype=np.float64)
        if (matrix < 0).any():
            raise NmfInputError("input matrix has negative entries")
    elif (matrix.data < 0).any():
        raise NmfInputError("input matrix has negative entries")
    n_docs, n_terms = matrix.shape
    k = config.num_topics
    if k > min(n_docs, n_terms):
        raise NmfInputError(
            f"num_topics={k} exceeds min(docs, vocab)={min(n_docs, n_terms)}"
        )

    rng = np.random.default_rng(config.seed)
    mean = float(matrix.mean())
    scale = np.sqrt(max(mean, _EPS) / k)
    left = rng.random((n_docs, k)) * scale + _EPS
    right = rng.random((k, n_terms)) * scale + _EPS

    objective = [_frobenius(matrix, left, right)]
    for _ in range(config.max_iter):
        right *= (left.T @ matrix) / (left.T @ left @ right + _EPS)
        left *= (matrix @ right.T) / (left @ (right @ right.T) + _EPS)
        objective.append(_frobenius(matrix, left, right))
        prev, curr = objective[-2], objective[-1]
        if abs(prev - curr) / max(prev, _EPS) < config.tol:
            break

    row_sums = left.sum(axis=1, keepdims=True)
    doc_topic = np.divide(left, row_sums, out=np.zeros_like(left), where=row_sums > 0)

    hard = np.argmax(left, axis=1)
    active = left.max(axis=1) > 0
    sizes = np.bincount(hard[active], minlength=k)
    topics = [
        TopicInfo(
            topic_id=j,
            keywords=top_keywords(right[j], vocabulary, config.top_k_words),
            size=int(sizes[j]),
        )
        for j in range(k)
    ]
    return TopicModelResult(
        method=METHOD_NMF,
        topics=topics,
        doc_ids=list(doc_ids) if doc_ids is not None else [str(i) for i in range(n_docs)],
        vocabulary=list(vocabulary),
        topic_word=right,
        doc_topic=doc_topic,
        config=config.to_dict(),
        seed=config.seed,
        diagnostics={"objective": [float(x) for x in objective]},
    )
