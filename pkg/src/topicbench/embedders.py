"""Pluggable document-embedding backends.

The workbench never trains an embedding model itself. The default backend is
a fully deterministic hashed-count projection (CI-friendly, no downloads);
a sentence-transformer backend is available when that package plus model
weights are installed. Backends are selected from config through
:func:`get_embedder`.
"""

from __future__ import annotations

import zlib
from typing import Protocol, Sequence

import numpy as np


class Embedder(Protocol):
    name: str
    dim: int

    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


class HashedProjectionEmbedder:
    """Seeded random projection of hashed token counts, L2-normalized.

    Tokens are hashed with crc32 into a fixed bucket space, giving a stable
    count vector per document, which a fixed Gaussian matrix projects down.
    Deterministic across processes and platforms.
    """

    def __init__(self, dim: int = 64, buckets: int = 1024, seed: int = 0):
        self.name = f"hashed-projection-{dim}d"
        self.dim = dim
        self.buckets = buckets
        self.seed = seed
        rng = np.random.default_rng(seed)
        self._projection = rng.standard_normal((buckets, dim))

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        counts = np.zeros((len(texts), self.buckets), dtype=np.float64)
        for row, text in enumerate(texts):
            for token in text.split():
                bucket = zlib.crc32(token.encode("utf-8")) % self.buckets
                counts[row, bucket] += 1.0
        vectors = counts @ self._projection
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        np.divide(vectors, norms, out=vectors, where=norms > 0)
        return vectors


class SentenceTransformerEmbedder:
    """Sentence-embedding backend; requires the sentence-transformers package."""

    def __init__(self, model_name: str = "all-MiniLM-L6-v2"):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:  # pragma: no cover - optional heavy dep
            raise RuntimeError(
                "sentence-transformers is not installed; "
                "use the 'hashed-projection' embedder or install it"
            ) from exc
        self._model = SentenceTransformer(model_name)
        self.name = f"sentence-transformer:{model_name}"
        self.dim = self._model.get_sentence_embedding_dimension()

    def embed(self, texts: Sequence[str]) -> np.ndarray:  # pragma: no cover
        return np.asarray(self._model.encode(list(texts), show_progress_bar=False))


def get_embedder(spec: dict | None = None) -> Embedder:
    """Build an embedder from a config block like {"backend": ..., ...}."""
    spec = dict(spec or {})
    backend = spec.pop("backend", "hashed-projection")
    if backend == "hashed-projection":
        return HashedProjectionEmbedder(**spec)
    if backend == "sentence-transformer":
        return SentenceTransformerEmbedder(**spec)
    raise ValueError(f"unknown embedder backend: {backend!r}")
