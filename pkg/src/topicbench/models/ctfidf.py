"""Class-based TF-IDF: keyword weights for cluster-level pseudo-documents.

weight(w, c) = tf(w, c) * ln(1 + A / f(w)) where tf is the raw count of w in
class c, A is the mean total word count per class, and f(w) is the total
count of w across all classes. Natural log throughout.
"""

from __future__ import annotations

import numpy as np


def compute_ctfidf(class_term_counts: np.ndarray) -> np.ndarray:
    counts = np.asarray(class_term_counts, dtype=np.float64)
    if counts.ndim != 2:
        raise ValueError("class_term_counts must be 2-dimensional")
    if (counts < 0).any():
        raise ValueError("counts must be nonnegative")
    total = counts.sum()
    if total == 0:
        raise ValueError("all-zero count matrix")
    avg_words_per_class = counts.sum(axis=1).mean()
    term_totals = counts.sum(axis=0)
    idf = np.zeros_like(term_totals)
    present = term_totals > 0
    idf[present] = np.log(1.0 + avg_words_per_class / term_totals[present])
    return counts * idf
