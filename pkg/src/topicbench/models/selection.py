"""Topic-count selection: coherence sweep and median-of-runs."""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .result import TopicModelResult

log = logging.getLogger(__name__)

DEFAULT_GRID = tuple(range(5, 51, 5))


@dataclass
class SweepResult:
    selected_k: int
    curve: list[tuple[int, float]] = field(default_factory=list)
    failed_points: list[int] = field(default_factory=list)


@dataclass
class MedianResult:
    median_topics: int
    counts: list[int] = field(default_factory=list)
    mean: float = 0.0
    std: float = 0.0


def choose_topics_by_coherence(
    trainer: Callable[[int], TopicModelResult],
    token_sets: Sequence[Sequence[str]],
    grid: Sequence[int] = DEFAULT_GRID,
    scorer: Callable[[TopicModelResult], float] | None = None,
) -> SweepResult:
    """Train at each grid size and keep the coherence argmax (ties -> smaller K).

    A failing grid point is skipped with a warning; if every point fails the
    sweep raises.
    """
    if scorer is None:
        from ..metrics import topic_coherence

        def scorer(result: TopicModelResult) -> float:
            return topic_coherence(result, token_sets)

    curve: list[tuple[int, float]] = []
    failed: list[int] = []
    best_k = None
    best_score = float("-inf")
    for k in grid:
        try:
            result = trainer(k)
            score = float(scorer(result))
        except Exception as exc:
            log.warning("sweep point K=%d failed: %s", k, exc)
            failed.append(k)
            continue
        curve.append((k, score))
        if score > best_score:
            best_score = score
            best_k = k
    if best_k is None:
        raise RuntimeError("every sweep point failed")
    return SweepResult(selected_k=best_k, curve=curve, failed_points=failed)


def choose_topics_median(
    trainer: Callable[[int], TopicModelResult],
    runs: int = 11,
    base_seed: int = 0,
) -> MedianResult:
    """Train ``runs`` models with distinct seeds; report the median topic count.

    The mean and sample standard deviation of the counts are reported
    alongside so the spread of the stochastic method is visible.
    """
    if runs < 1 or runs % 2 == 0:
        raise ValueError("runs must be odd and >= 1")
    counts: list[int] = []
    for i in range(runs):
        try:
            result = trainer(base_seed + i)
        except Exception as exc:
            raise RuntimeError(f"median selection run {i} failed: {exc}") from exc
        counts.append(result.num_topics)
    ordered = sorted(counts)
    median = ordered[len(ordered) // 2]
    mean = statistics.fmean(counts)
    std = statistics.stdev(counts) if len(counts) > 1 else 0.0
    return MedianResult(median_topics=median, counts=counts, mean=mean, std=std)
