"""Token vocabulary, bag-of-words corpus, and TF-IDF weighting."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class EmptyCorpusError(ValueError):
    pass


@dataclass
class Vocabulary:
    """Dense token <-> id bijection with per-token document frequencies."""

    id_to_token: list[str] = field(default_factory=list)
    token_to_id: dict[str, int] = field(default_factory=dict)
    doc_freq: list[int] = field(default_factory=list)
    num_docs: int = 0

    def __len__(self) -> int:
        return len(self.id_to_token)

    def add_document(self, tokens: Iterable[str]) -> None:
        self.num_docs += 1
        seen: set[str] = set()
        # First-appearance order keeps id assignment independent of string
        # hash randomization, so artifacts are stable across processes.
        for token in tokens:
            if token in seen:
                continue
            seen.add(token)
            idx = self.token_to_id.get(token)
            if idx is None:
                idx = len(self.id_to_token)
                self.token_to_id[token] = idx
                self.id_to_token.append(token)
                self.doc_freq.append(0)
            self.doc_freq[idx] += 1

    def df(self, token: str) -> int:
        return self.doc_freq[self.token_to_id[token]]


# One document as (token_id, count) pairs; a corpus is a list of documents.
BowDocument = list[tuple[int, int]]
BowCorpus = list[BowDocument]


def build_vocabulary(token_sets: Sequence[Sequence[str]]) -> Vocabulary:
    """Assign dense ids (first-appearance order) and count document frequencies."""
    vocab = Vocabulary()
    for tokens in token_sets:
        vocab.add_document(tokens)
    if len(vocab) == 0:
        raise EmptyCorpusError("empty corpus")
    return vocab


def bow_corpus(token_sets: Sequence[Sequence[str]], vocab: Vocabulary) -> BowCorpus:
    """Convert token lists to (token_id, count) documents, id-ascending."""
    corpus: BowCorpus = []
    for tokens in token_sets:
        counts = Counter(vocab.token_to_id[t] for t in tokens if t in vocab.token_to_id)
        corpus.append(sorted(counts.items()))
    return corpus


def tfidf_matrix(
    token_sets: Sequence[Sequence[str]],
    vocab: Vocabulary | None = None,
    l2_normalize: bool = True,
) -> tuple[np.ndarray, Vocabulary]:
    """Dense docs x vocab TF-IDF matrix.

    tf = raw in-document count; idf = ln((1 + N) / (1 + df)) + 1 (smoothed so
    a term present in every document keeps positive weight). Rows are
    L2-normalized by default, matching the vectorizer convention the NMF
    pipeline expects.
    """
    if vocab is None:
        vocab = build_vocabulary(token_sets)
    n_docs = len(token_sets)
    n_terms = len(vocab)
    tf = np.zeros((n_docs, n_terms), dtype=np.float64)
    for row, tokens in enumerate(token_sets):
        for token in tokens:
            idx = vocab.token_to_id.get(token)
            if idx is not None:
                tf[row, idx] += 1.0
    df = np.asarray(vocab.doc_freq, dtype=np.float64)
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0
    weights = tf * idf
    if l2_normalize:
        norms = np.linalg.norm(weights, axis=1, keepdims=True)
        np.divide(weights, norms, out=weights, where=norms > 0)
    return weights, vocab
