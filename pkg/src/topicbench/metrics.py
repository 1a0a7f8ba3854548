"""Model evaluation metrics: coherence, diversity, KL-divergence, perplexity.

Coherence is the sliding-window/NPMI/indirect-cosine family (top-10 words,
boolean windows of width 110): per topic, each top word gets a vector of its
NPMI values against the whole top-word set, confirmation is the cosine of
that vector against the summed set vector, and the topic score is the mean
confirmation; the model score averages over topics.

KL-divergence here is D(P_corpus || P_model) in nats, where P_corpus is the
empirical word distribution of the reference corpus and P_model is the
normalized mean of the model's topic-word rows, both additively smoothed
with 1e-12 and renormalized over the shared vocabulary. Lower means the
model's aggregate word distribution sits closer to the corpus.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .accel import NUMBA_ENABLED, maybe_njit
from .models.result import OUTLIER_LABEL, TopicModelResult
from .preprocess import TokenSet

log = logging.getLogger(__name__)

EPSILON = 1e-12
DEFAULT_WINDOW = 110


@dataclass
class MetricsReport:
    method: str
    num_topics: int
    coherence: float
    diversity: float
    kl_divergence: float
    perplexity: float
    runtime_seconds: float

    def to_dict(self) -> dict:
        return asdict(self)


def _window_counts_py(ids: np.ndarray, window: int, occ: np.ndarray, joint: np.ndarray) -> int:
    n = ids.shape[0]
    if n == 0:
        return 0
    n_windows = max(1, n - window + 1)
    m = occ.shape[0]
    presence = np.zeros((n_windows, m), dtype=np.int64)
    for start in range(n_windows):
        chunk = ids[start : start + window]
        hits = chunk[chunk >= 0]
        if hits.size:
            presence[start, np.unique(hits)] = 1
    occ += presence.sum(axis=0)
    joint += presence.T @ presence
    return n_windows


@maybe_njit
def _window_counts_nb(ids, window, occ, joint):
    n = ids.shape[0]
    if n == 0:
        return 0
    n_windows = n - window + 1
    if n_windows < 1:
        n_windows = 1
    m = occ.shape[0]
    mark = np.zeros(m, dtype=np.bool_)
    for start in range(n_windows):
        for j in range(m):
            mark[j] = False
        end = start + window
        if end > n:
            end = n
        for t in range(start, end):
            w = ids[t]
            if w >= 0:
                mark[w] = True
        for a in range(m):
            if mark[a]:
                occ[a] += 1
                for b in range(m):
                    if mark[b]:
                        joint[a, b] += 1
    return n_windows


def window_cooccurrence(
    token_sets: Sequence[Sequence[str]],
    candidates: Sequence[str],
    window: int = DEFAULT_WINDOW,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Boolean sliding-window occurrence and co-occurrence counts.

    Documents shorter than the window contribute a single whole-document
    window. Returns (occurrence counts, joint counts, total windows).
    """
    index = {w: i for i, w in enumerate(candidates)}
    m = len(candidates)
    occ = np.zeros(m, dtype=np.int64)
    joint = np.zeros((m, m), dtype=np.int64)
    total = 0
    counter = _window_counts_nb if NUMBA_ENABLED else _window_counts_py
    for tokens in token_sets:
        ids = np.asarray([index.get(t, -1) for t in tokens], dtype=np.int64)
        total += int(counter(ids, window, occ, joint))
    return occ, joint, total


def _npmi(p_i: float, p_j: float, p_ij: float) -> float:
    if p_i <= 0.0 or p_j <= 0.0:
        return 0.0
    if p_ij >= 1.0 - EPSILON:
        return 1.0  # perfect association; the log-ratio form degenerates
    return math.log((p_ij + EPSILON) / (p_i * p_j)) / -math.log(p_ij + EPSILON)


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def topic_coherence(
    model: TopicModelResult,
    token_sets: Sequence[TokenSet | Sequence[str]],
    top_k: int = 10,
    window: int = DEFAULT_WINDOW,
) -> float:
    """Sliding-window NPMI coherence with indirect cosine confirmation."""
    docs = [ts.tokens if isinstance(ts, TokenSet) else list(ts) for ts in token_sets]
    if not docs or all(len(d) == 0 for d in docs):
        raise ValueError("reference corpus is empty")
    if not model.topics:
        raise ValueError("model has no topics")
    topic_words: list[list[str]] = []
    for topic in model.topics:
        words = [w for w, _ in topic.keywords[:top_k]]
        if len(words) < top_k:
            log.warning(
                "topic %d has only %d keywords (wanted %d)",
                topic.topic_id, len(words), top_k,
            )
        topic_words.append(words)
    candidates = sorted({w for words in topic_words for w in words})
    occ, joint, total = window_cooccurrence(docs, candidates, window)
    if total == 0:
        raise ValueError("reference corpus produced no windows")
    p_single = occ / total
    p_joint = joint / total
    index = {w: i for i, w in enumerate(candidates)}

    scores = []
    for words in topic_words:
        ix = [index[w] for w in words]
        size = len(ix)
        npmi = np.empty((size, size), dtype=np.float64)
        for a in range(size):
            for b in range(size):
                npmi[a, b] = _npmi(
                    p_single[ix[a]], p_single[ix[b]], p_joint[ix[a], ix[b]]
                )
        context = npmi.sum(axis=0)
        confirmations = [_cosine(npmi[a], context) for a in range(size)]
        scores.append(float(np.mean(confirmations)))
    return float(np.mean(scores))


def topic_diversity(model: TopicModelResult, top_k: int = 10) -> float:
    """Fraction of unique words among all topics' top-k keywords."""
    if not model.topics:
        raise ValueError("model has no topics")
    seen: set[str] = set()
    taken = 0
    for topic in model.topics:
        words = [w for w, _ in topic.keywords[:top_k]]
        taken += len(words)
        seen.update(words)
    return len(seen) / taken if taken else 0.0


def kl_divergence(
    model: TopicModelResult, token_sets: Sequence[TokenSet | Sequence[str]]
) -> float:
    """D(corpus || model) over the shared vocabulary, in nats."""
    docs = [ts.tokens if isinstance(ts, TokenSet) else list(ts) for ts in token_sets]
    corpus_counts: dict[str, int] = {}
    for tokens in docs:
        for t in tokens:
            corpus_counts[t] = corpus_counts.get(t, 0) + 1
    model_index = {w: i for i, w in enumerate(model.vocabulary)}
    shared = sorted(w for w in corpus_counts if w in model_index)
    if not shared:
        raise ValueError("model and corpus share no vocabulary")
    p = np.array([corpus_counts[w] for w in shared], dtype=np.float64)
    if model.topic_word.shape[0] == 0:
        raise ValueError("model has no topics")
    mean_row = model.topic_word.mean(axis=0)
    q = np.array([mean_row[model_index[w]] for w in shared], dtype=np.float64)
    return kl_from_distributions(p, q)


def kl_from_distributions(p: np.ndarray, q: np.ndarray, eps: float = EPSILON) -> float:
    """Smoothed-and-renormalized discrete KL divergence (nats)."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.size == 0 or p.size != q.size:
        raise ValueError("distributions must be non-empty and equally sized")
    p = p / p.sum() + eps
    q = q / q.sum() + eps
    p /= p.sum()
    q /= q.sum()
    return float(np.sum(p * np.log(p / q)))


def _predictive_rows(model: TopicModelResult) -> tuple[np.ndarray, dict[str, int]]:
    """Per-known-document predictive word distributions plus a doc-id index."""
    phi = np.asarray(model.topic_word, dtype=np.float64)
    row_sums = phi.sum(axis=1, keepdims=True)
    phi = np.divide(phi, row_sums, out=np.zeros_like(phi), where=row_sums > 0)
    n_topics = phi.shape[0]
    if model.doc_topic is not None:
        theta = np.asarray(model.doc_topic, dtype=np.float64)
    elif model.doc_labels is not None and n_topics:
        theta = np.zeros((len(model.doc_labels), n_topics))
        for d, label in enumerate(model.doc_labels):
            if label != OUTLIER_LABEL:
                theta[d, int(label)] = 1.0
    else:
        theta = np.zeros((len(model.doc_ids), n_topics))
    sums = theta.sum(axis=1, keepdims=True)
    theta = np.divide(theta, sums, out=np.zeros_like(theta), where=sums > 0)
    # Docs without any membership (outliers) fall back to the mean mixture.
    if n_topics:
        fallback = theta[theta.sum(axis=1) > 0]
        mean_mix = (
            fallback.mean(axis=0) if fallback.size else np.full(n_topics, 1.0 / n_topics)
        )
        empty = theta.sum(axis=1) == 0
        theta[empty] = mean_mix
    predictive = theta @ phi if n_topics else np.zeros((theta.shape[0], phi.shape[1]))
    return predictive, {doc_id: i for i, doc_id in enumerate(model.doc_ids)}


def perplexity(
    model: TopicModelResult,
    held_out: Sequence[TokenSet | Sequence[str]],
    eps: float = EPSILON,
) -> float:
    """exp(-mean log p(token)) under each document's predictive distribution.

    Held-out documents whose ids match training documents reuse their learned
    mixtures; unknown documents get the model's mean mixture. Out-of-vocabulary
    tokens receive probability ``eps``.
    """
    if not held_out:
        raise ValueError("held_out must be non-empty")
    predictive, doc_index = _predictive_rows(model)
    mean_predictive = (
        predictive.mean(axis=0) if predictive.size else np.zeros(len(model.vocabulary))
    )
    vocab_index = {w: i for i, w in enumerate(model.vocabulary)}
    log_total = 0.0
    n_tokens = 0
    for ts in held_out:
        tokens = ts.tokens if isinstance(ts, TokenSet) else list(ts)
        doc_id = ts.thread_id if isinstance(ts, TokenSet) else None
        row = predictive[doc_index[doc_id]] if doc_id in doc_index else mean_predictive
        for token in tokens:
            idx = vocab_index.get(token)
            prob = eps if idx is None else float(row[idx]) + eps
            log_total += math.log(prob)
            n_tokens += 1
    if n_tokens == 0:
        raise ValueError("held_out contains no tokens")
    return float(math.exp(-log_total / n_tokens))


def timed(job: Callable, *args, **kwargs):
    """Run a job and return (result, wall-clock seconds)."""
    started = time.perf_counter()
    result = job(*args, **kwargs)
    return result, time.perf_counter() - started


def evaluate_model(
    model: TopicModelResult,
    token_sets: Sequence[TokenSet],
    held_out: Sequence[TokenSet] | None = None,
    top_k: int = 10,
    window: int = DEFAULT_WINDOW,
) -> MetricsReport:
    """All metrics for one trained model against the reference token sets."""
    return MetricsReport(
        method=model.method,
        num_topics=model.num_topics,
        coherence=topic_coherence(model, token_sets, top_k=top_k, window=window),
        diversity=topic_diversity(model, top_k=top_k),
        kl_divergence=kl_divergence(model, token_sets),
        perplexity=perplexity(model, held_out if held_out is not None else token_sets),
        runtime_seconds=model.runtime_seconds,
    )


def save_reports(reports: Iterable[MetricsReport], path: str | Path) -> None:
    Path(path).write_text(
        json.dumps([r.to_dict() for r in reports], indent=1, sort_keys=True)
    )


def load_reports(path: str | Path) -> list[MetricsReport]:
    return [MetricsReport(**item) for item in json.loads(Path(path).read_text())]


def metric_table_csv(
    rows: Sequence[str], columns: Sequence[str], values: Sequence[Sequence[float]]
) -> str:
    """Render one metric table (rows = datasets, columns = methods) as CSV,
    with mean/min/max summary rows mirroring the report layout."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["dataset", *columns])
    matrix = np.asarray(values, dtype=np.float64)
    for label, row in zip(rows, matrix):
        writer.writerow([label, *[f"{v:g}" for v in row]])
    if matrix.size:
        writer.writerow(["mean", *[f"{v:g}" for v in matrix.mean(axis=0)]])
        writer.writerow(["minimum", *[f"{v:g}" for v in matrix.min(axis=0)]])
        writer.writerow(["maximum", *[f"{v:g}" for v in matrix.max(axis=0)]])
    return buf.getvalue()
