#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure numpy/python fallbacks.

The two hot loops are the per-token Gibbs sweep and the sliding-window
co-occurrence counter. Both variants consume identical inputs and must
produce identical outputs; this script verifies that and reports speedups.

Run:
    python benchmarks/bench_kernels.py [--tokens 200000] [--docs 2000] [--topics 20]

Set TOPICBENCH_NUMBA=0 to see the fallback measured against itself.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from topicbench.accel import NUMBA_ENABLED
from topicbench.metrics import _window_counts_nb, _window_counts_py
from topicbench.models.lda import _gibbs_pass_nb, _gibbs_pass_py


def _time(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - started)
    return best


def bench_gibbs(n_tokens: int, n_docs: int, n_topics: int, vocab: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    token_doc = np.sort(rng.integers(0, n_docs, n_tokens)).astype(np.int64)
    token_word = rng.integers(0, vocab, n_tokens).astype(np.int64)
    z0 = rng.integers(0, n_topics, n_tokens).astype(np.int64)
    uniforms = rng.random(n_tokens)
    eta = np.full(vocab, 1.0 / n_topics)

    def state():
        z = z0.copy()
        n_dk = np.zeros((n_docs, n_topics))
        n_kw = np.zeros((n_topics, vocab))
        n_k = np.zeros(n_topics)
        np.add.at(n_dk, (token_doc, z), 1.0)
        np.add.at(n_kw, (z, token_word), 1.0)
        np.add.at(n_k, z, 1.0)
        return z, n_dk, n_kw, n_k

    def run(kernel):
        z, n_dk, n_kw, n_k = state()
        kernel(token_doc, token_word, z, n_dk, n_kw, n_k,
               1.0 / n_topics, eta, float(eta.sum()), uniforms)
        return z

    z_nb = run(_gibbs_pass_nb)  # warm-up also triggers JIT compilation
    z_py = run(_gibbs_pass_py)
    assert np.array_equal(z_nb, z_py), "kernel variants disagree"

    t_nb = _time(lambda: run(_gibbs_pass_nb))
    t_py = _time(lambda: run(_gibbs_pass_py))
    return t_nb, t_py


def bench_windows(n_docs: int, doc_len: int, n_candidates: int, window: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    docs = [rng.integers(-1, n_candidates, doc_len).astype(np.int64) for _ in range(n_docs)]

    def run(counter):
        occ = np.zeros(n_candidates, dtype=np.int64)
        joint = np.zeros((n_candidates, n_candidates), dtype=np.int64)
        total = 0
        for ids in docs:
            total += int(counter(ids, window, occ, joint))
        return occ, joint, total

    out_nb = run(_window_counts_nb)
    out_py = run(_window_counts_py)
    assert np.array_equal(out_nb[0], out_py[0]) and np.array_equal(out_nb[1], out_py[1])

    t_nb = _time(lambda: run(_window_counts_nb))
    t_py = _time(lambda: run(_window_counts_py))
    return t_nb, t_py


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tokens", type=int, default=200_000)
    parser.add_argument("--docs", type=int, default=2_000)
    parser.add_argument("--topics", type=int, default=20)
    parser.add_argument("--vocab", type=int, default=5_000)
    parser.add_argument("--window", type=int, default=110)
    args = parser.parse_args()

    mode = "numba" if NUMBA_ENABLED else "python (numba disabled via TOPICBENCH_NUMBA)"
    print(f"accelerated path: {mode}")
    print(f"{'kernel':<24}{'accel (s)':>12}{'fallback (s)':>14}{'speedup':>10}")

    t_nb, t_py = bench_gibbs(args.tokens, args.docs, args.topics, args.vocab)
    print(f"{'gibbs sweep':<24}{t_nb:>12.4f}{t_py:>14.4f}{t_py / t_nb:>9.1f}x")

    t_nb, t_py = bench_windows(200, 400, 60, args.window)
    print(f"{'window co-occurrence':<24}{t_nb:>12.4f}{t_py:>14.4f}{t_py / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
