"""Latent topic trainer: collapsed Gibbs sampling over a bag-of-words corpus.

Document-topic prior is symmetric alpha = 1/K; the word-topic prior eta is
either a fixed scalar or "auto": an asymmetric vector learned by fixed-point
updates (Minka) every ``eta_update_every`` passes.

The per-token sweep is the hot loop. It ships as a numba kernel and as a
numpy fallback; both consume the same pregenerated uniform draws and produce
bit-identical assignments, so the two paths are interchangeable and the
benchmark compares them fairly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from scipy.special import digamma

from ..accel import NUMBA_ENABLED, maybe_njit
from .result import METHOD_LDA, TopicInfo, TopicModelResult, top_keywords
from .vocabulary import BowCorpus, Vocabulary

ETA_AUTO = "auto"


class LdaConfigError(ValueError):
    pass


def _default_workers() -> int:
    return max(1, (os.cpu_count() or 2) - 1)


@dataclass
class LdaConfig:
    num_topics: int
    alpha: float | None = None  # None -> symmetric 1/K
    eta: float | str = ETA_AUTO
    passes: int = 10
    workers: int = field(default_factory=_default_workers)
    seed: int = 0
    eta_update_every: int = 10
    top_k_words: int = 10

    def __post_init__(self):
        if self.num_topics < 1:
            raise LdaConfigError("num_topics must be >= 1")
        if self.workers < 1:
            raise LdaConfigError("workers must be >= 1")
        if self.passes < 1:
            raise LdaConfigError("passes must be >= 1")
        if self.alpha is None:
            self.alpha = 1.0 / self.num_topics

    def to_dict(self) -> dict:
        return {
            "num_topics": self.num_topics,
            "alpha": self.alpha,
            "eta": self.eta,
            "passes": self.passes,
            "workers": self.workers,
            "seed": self.seed,
            "eta_update_every": self.eta_update_every,
            "top_k_words": self.top_k_words,
        }


def _gibbs_pass_py(doc_ids, word_ids, z, n_dk, n_kw, n_k, alpha, eta, eta_sum, uniforms):
    """Numpy fallback sweep: one full pass over the token stream."""
    for i in range(doc_ids.shape[0]):
        d = doc_ids[i]
        w = word_ids[i]
        k_old = z[i]
        n_dk[d, k_old] -= 1.0
        n_kw[k_old, w] -= 1.0
        n_k[k_old] -= 1.0
        probs = (n_dk[d] + alpha) * (n_kw[:, w] + eta[w]) / (n_k + eta_sum)
        cum = np.cumsum(probs)
        target = uniforms[i] * cum[-1]
        k_new = int(np.searchsorted(cum, target, side="right"))
        if k_new >= probs.shape[0]:
            k_new = probs.shape[0] - 1
        z[i] = k_new
        n_dk[d, k_new] += 1.0
        n_kw[k_new, w] += 1.0
        n_k[k_new] += 1.0


@maybe_njit
def _gibbs_pass_nb(doc_ids, word_ids, z, n_dk, n_kw, n_k, alpha, eta, eta_sum, uniforms):
    num_topics = n_k.shape[0]
    probs = np.empty(num_topics, dtype=np.float64)
    for i in range(doc_ids.shape[0]):
        d = doc_ids[i]
        w = word_ids[i]
        k_old = z[i]
        n_dk[d, k_old] -= 1.0
        n_kw[k_old, w] -= 1.0
        n_k[k_old] -= 1.0
        total = 0.0
        for k in range(num_topics):
            p = (n_dk[d, k] + alpha) * (n_kw[k, w] + eta[w]) / (n_k[k] + eta_sum)
            probs[k] = p
            total += p
        target = uniforms[i] * total
        acc = 0.0
        k_new = num_topics - 1
        for k in range(num_topics):
            acc += probs[k]
            if acc > target:
                k_new = k
                break
        z[i] = k_new
        n_dk[d, k_new] += 1.0
        n_kw[k_new, w] += 1.0
        n_k[k_new] += 1.0


def gibbs_pass(*args):
    if NUMBA_ENABLED:
        _gibbs_pass_nb(*args)
    else:
        _gibbs_pass_py(*args)


def _update_eta(eta: np.ndarray, n_kw: np.ndarray, n_k: np.ndarray) -> np.ndarray:
    """One Minka fixed-point step for the asymmetric word prior."""
    num_topics = n_kw.shape[0]
    eta_sum = eta.sum()
    numer = digamma(n_kw + eta).sum(axis=0) - num_topics * digamma(eta)
    denom = digamma(n_k + eta_sum).sum() - num_topics * digamma(eta_sum)
    if not np.isfinite(denom) or denom <= 0:
        return eta
    new = eta * numer / denom
    new = np.where(np.isfinite(new), new, eta)
    return np.maximum(new, 1e-8)


def _flatten(corpus: BowCorpus) -> tuple[np.ndarray, np.ndarray]:
    doc_ids = []
    word_ids = []
    for d, doc in enumerate(corpus):
        for token_id, count in doc:
            doc_ids.extend([d] * count)
            word_ids.extend([token_id] * count)
    return (
        np.asarray(doc_ids, dtype=np.int64),
        np.asarray(word_ids, dtype=np.int64),
    )


def train_lda(
    corpus: BowCorpus,
    vocab: Vocabulary,
    config: LdaConfig,
    doc_ids: list[str] | None = None,
) -> TopicModelResult:
    """Train on a bag-of-words corpus; deterministic under a fixed seed."""
    n_docs = len(corpus)
    num_topics = config.num_topics
    if n_docs == 0:
        raise LdaConfigError("corpus is empty")
    if num_topics > n_docs:
        raise LdaConfigError(
            f"num_topics={num_topics} exceeds document count {n_docs}"
        )
    n_terms = len(vocab)

    token_doc, token_word = _flatten(corpus)
    n_tokens = token_doc.shape[0]
    if n_tokens == 0:
        raise LdaConfigError("corpus has no tokens")

    alpha = float(config.alpha)
    auto_eta = config.eta == ETA_AUTO
    eta = np.full(
        n_terms,
        1.0 / num_topics if auto_eta else float(config.eta),
        dtype=np.float64,
    )

    rng = np.random.default_rng(config.seed)
    z = np.floor(rng.random(n_tokens) * num_topics).astype(np.int64)
    np.clip(z, 0, num_topics - 1, out=z)

    n_dk = np.zeros((n_docs, num_topics), dtype=np.float64)
    n_kw = np.zeros((num_topics, n_terms), dtype=np.float64)
    n_k = np.zeros(num_topics, dtype=np.float64)
    np.add.at(n_dk, (token_doc, z), 1.0)
    np.add.at(n_kw, (z, token_word), 1.0)
    np.add.at(n_k, z, 1.0)

    for pass_no in range(1, config.passes + 1):
        uniforms = rng.random(n_tokens)
        gibbs_pass(
            token_doc, token_word, z, n_dk, n_kw, n_k,
            alpha, eta, float(eta.sum()), uniforms,
        )
        if auto_eta and pass_no % config.eta_update_every == 0:
            eta = _update_eta(eta, n_kw, n_k)

    theta = (n_dk + alpha) / (n_dk.sum(axis=1, keepdims=True) + num_topics * alpha)
    phi = (n_kw + eta) / (n_kw.sum(axis=1, keepdims=True) + eta.sum())

    hard = np.argmax(theta, axis=1)
    sizes = np.bincount(hard, minlength=num_topics)
    vocabulary = list(vocab.id_to_token)
    topics = [
        TopicInfo(
            topic_id=k,
            keywords=top_keywords(phi[k], vocabulary, config.top_k_words),
            size=int(sizes[k]),
        )
        for k in range(num_topics)
    ]
    return TopicModelResult(
        method=METHOD_LDA,
        topics=topics,
        doc_ids=list(doc_ids) if doc_ids is not None else [str(i) for i in range(n_docs)],
        vocabulary=vocabulary,
        topic_word=phi,
        doc_topic=theta,
        config=config.to_dict(),
        seed=config.seed,
        diagnostics={"eta": [float(x) for x in eta[: min(8, n_terms)]]},
    )
