"""Statistical comparison battery.

One-way ANOVA with Tukey HSD post-hoc, paired t, exact Wilcoxon signed-rank,
Pearson correlation, Friedman with Nemenyi post-hoc, and descriptive
summaries. Test statistics are computed from first principles here;
distribution tails (F, t, chi-squared, normal, studentized range) come from
scipy, with accuracy well inside 1e-8 in p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats as st

EXACT_WILCOXON_LIMIT = 20
EXACT_FRIEDMAN_LIMIT = 500_000


class DegenerateInputError(ValueError):
    pass


@dataclass
class PairwiseResult:
    pair: tuple[str, str]
    mean_diff: float
    ci_low: float
    ci_high: float
    p_value: float
    significant: bool = False

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "mean_diff": self.mean_diff,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "p_value": self.p_value,
            "significant": self.significant,
        }


@dataclass
class StatTestResult:
    test: str
    statistic: float
    df: tuple[float, ...] | float
    p_value: float
    effect_size: float | None = None
    pairwise: list[PairwiseResult] | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "statistic": self.statistic,
            "df": list(self.df) if isinstance(self.df, tuple) else self.df,
            "p_value": self.p_value,
            "effect_size": self.effect_size,
            "pairwise": None
            if self.pairwise is None
            else [p.to_dict() for p in self.pairwise],
            "extras": self.extras,
        }


class Describe(NamedTuple):
    mean: float
    minimum: float
    maximum: float


def describe(column: Sequence[float]) -> Describe:
    values = np.asarray(column, dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty column")
    return Describe(float(values.mean()), float(values.min()), float(values.max()))


def _validate_groups(groups: Sequence[Sequence[float]]) -> list[np.ndarray]:
    if len(groups) < 2:
        raise ValueError("need at least two groups")
    arrays = [np.asarray(g, dtype=np.float64) for g in groups]
    for i, g in enumerate(arrays):
        if g.size < 2:
            raise ValueError(f"group {i} has fewer than two values")
    return arrays


def _sums_of_squares(arrays: list[np.ndarray]) -> tuple[float, float, int, int]:
    grand = np.concatenate(arrays)
    grand_mean = grand.mean()
    ss_between = float(sum(g.size * (g.mean() - grand_mean) ** 2 for g in arrays))
    ss_within = float(sum(((g - g.mean()) ** 2).sum() for g in arrays))
    return ss_between, ss_within, len(arrays), grand.size


def one_way_anova(groups: Sequence[Sequence[float]]) -> StatTestResult:
    """F = MS_between / MS_within; effect size eta^2 = SSB / SST."""
    arrays = _validate_groups(groups)
    ss_between, ss_within, k, n = _sums_of_squares(arrays)
    df_between, df_within = k - 1, n - k
    ms_between = ss_between / df_between
    ms_within = ss_within / df_within
    if ms_within == 0.0:
        # No residual variance: identical groups give F = 0 / 0 -> define 0.
        f_stat = math.inf if ms_between > 0 else 0.0
    else:
        f_stat = ms_between / ms_within
    p = float(st.f.sf(f_stat, df_between, df_within)) if math.isfinite(f_stat) else 0.0
    total = ss_between + ss_within
    eta_sq = ss_between / total if total > 0 else 0.0
    return StatTestResult(
        test="one_way_anova",
        statistic=float(f_stat),
        df=(float(df_between), float(df_within)),
        p_value=p,
        effect_size=float(eta_sq),
        extras={"ss_between": ss_between, "ss_within": ss_within},
    )


def tukey_hsd(
    groups: Sequence[Sequence[float]],
    labels: Sequence[str] | None = None,
    alpha: float = 0.05,
) -> StatTestResult:
    """All-pairs mean comparison with simultaneous studentized-range CIs.

    For pair (i, j) with i before j in the input order, mean_diff is
    mean(j) - mean(i).
    """
    arrays = _validate_groups(groups)
    if labels is None:
        labels = [f"group{i}" for i in range(len(arrays))]
    _, ss_within, k, n = _sums_of_squares(arrays)
    df_within = n - k
    ms_within = ss_within / df_within
    q_crit = float(st.studentized_range.ppf(1.0 - alpha, k, df_within))
    pairwise = []
    for i, j in itertools.combinations(range(k), 2):
        gi, gj = arrays[i], arrays[j]
        diff = float(gj.mean() - gi.mean())
        se = math.sqrt(ms_within * (1.0 / gi.size + 1.0 / gj.size))
        half = q_crit * se / math.sqrt(2.0)
        if se > 0:
            q_obs = abs(diff) * math.sqrt(2.0) / se
            p = float(st.studentized_range.sf(q_obs, k, df_within))
        else:
            p = 1.0 if diff == 0 else 0.0
        pairwise.append(
            PairwiseResult(
                pair=(labels[i], labels[j]),
                mean_diff=diff,
                ci_low=diff - half,
                ci_high=diff + half,
                p_value=p,
                significant=p < alpha,
            )
        )
    anova = one_way_anova(groups)
    return StatTestResult(
        test="tukey_hsd",
        statistic=anova.statistic,
        df=(float(k), float(df_within)),
        p_value=anova.p_value,
        effect_size=anova.effect_size,
        pairwise=pairwise,
        extras={"alpha": alpha, "q_critical": q_crit},
    )


def paired_t(x: Sequence[float], y: Sequence[float]) -> StatTestResult:
    """t = mean(d) / (sd(d) / sqrt(n)) on paired differences, two-sided."""
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.size != b.size:
        raise ValueError("paired samples must have equal length")
    if a.size < 2:
        raise ValueError("need at least two pairs")
    d = a - b
    if np.all(d == 0):
        raise DegenerateInputError("all paired differences are zero")
    n = d.size
    sd = d.std(ddof=1)
    if sd == 0:
        raise DegenerateInputError("paired differences have zero variance")
    t_stat = float(d.mean() / (sd / math.sqrt(n)))
    p = 2.0 * float(st.t.sf(abs(t_stat), n - 1))
    return StatTestResult(
        test="paired_t", statistic=t_stat, df=float(n - 1), p_value=min(p, 1.0)
    )


def _exact_signed_rank_p(doubled_ranks: np.ndarray, doubled_w: float) -> float:
    """Two-sided exact p via the full sign-pattern distribution of W+.

    Ranks are doubled so mid-ranks become integers; the distribution of the
    doubled W+ over all 2^n sign patterns is built by dynamic programming
    (equivalent to enumerating every pattern).
    """
    total_sum = int(doubled_ranks.sum())
    dist = np.zeros(total_sum + 1, dtype=np.float64)
    dist[0] = 1.0
    for r in doubled_ranks:
        r = int(r)
        shifted = np.zeros_like(dist)
        shifted[r:] = dist[: total_sum - r + 1]
        dist = dist + shifted
    n_patterns = dist.sum()
    cutoff = int(math.floor(doubled_w + 1e-9))
    p = 2.0 * float(dist[: cutoff + 1].sum()) / n_patterns
    return min(p, 1.0)


def wilcoxon_signed_rank(x: Sequence[float], y: Sequence[float]) -> StatTestResult:
    """Signed-rank test; W = smaller signed-rank sum.

    Exact two-sided p (full sign-pattern distribution) for n <= 20 after
    dropping zero differences; normal approximation with tie correction
    beyond that.
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.size != b.size:
        raise ValueError("paired samples must have equal length")
    d = a - b
    zeros_dropped = int(np.sum(d == 0))
    d = d[d != 0]
    n = d.size
    if n == 0:
        raise DegenerateInputError("all paired differences are zero")
    ranks = st.rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w = min(w_plus, w_minus)
    if n <= EXACT_WILCOXON_LIMIT:
        doubled = np.round(ranks * 2).astype(np.int64)
        p = _exact_signed_rank_p(doubled, 2.0 * w)
        exact = True
    else:
        mean = n * (n + 1) / 4.0
        tie_sizes = np.bincount(np.round(ranks * 2).astype(np.int64))
        tie_term = float(np.sum(tie_sizes**3 - tie_sizes)) / 48.0
        var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
        z = (w - mean) / math.sqrt(var)
        p = min(2.0 * float(st.norm.sf(abs(z))), 1.0)
        exact = False
    return StatTestResult(
        test="wilcoxon_signed_rank",
        statistic=w,
        df=float(n),
        p_value=p,
        extras={"zeros_dropped": zeros_dropped, "exact": exact,
                "w_plus": w_plus, "w_minus": w_minus},
    )


def pearson(x: Sequence[float], y: Sequence[float]) -> StatTestResult:
    """Pearson r with two-sided p from the t transform (df = n - 2)."""
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)
    if a.size != b.size:
        raise ValueError("samples must have equal length")
    if a.size < 3:
        raise ValueError("need at least three pairs")
    if a.std() == 0 or b.std() == 0:
        raise DegenerateInputError("zero variance in one of the samples")
    am = a - a.mean()
    bm = b - b.mean()
    r = float(np.dot(am, bm) / math.sqrt(np.dot(am, am) * np.dot(bm, bm)))
    r = max(-1.0, min(1.0, r))
    n = a.size
    if abs(r) == 1.0:
        p = 0.0
    else:
        t_stat = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = min(2.0 * float(st.t.sf(abs(t_stat), n - 2)), 1.0)
    return StatTestResult(test="pearson", statistic=r, df=float(n - 2), p_value=p)


def _midranks_by_row(table: np.ndarray) -> np.ndarray:
    return np.vstack([st.rankdata(row) for row in table])


def _friedman_chi2(rank_sums: np.ndarray, n: int, k: int) -> float:
    return float(12.0 / (n * k * (k + 1)) * np.sum(rank_sums**2) - 3.0 * n * (k + 1))


def friedman(rank_table: Sequence[Sequence[float]]) -> StatTestResult:
    """Friedman chi-squared over n blocks x k treatments (mid-rank ties).

    For small untied tables the p-value is exact: the observed statistic is
    referred to the full permutation distribution over all (k!)^n equally
    likely within-block rankings. Larger or tied tables use the chi-squared
    tail with df = k - 1.
    """
    table = np.asarray(rank_table, dtype=np.float64)
    if table.ndim != 2:
        raise ValueError("rank_table must be 2-dimensional")
    n, k = table.shape
    if n < 2 or k < 2:
        raise ValueError("need at least 2 blocks and 2 treatments")
    ranks = _midranks_by_row(table)
    rank_sums = ranks.sum(axis=0)
    chi2 = _friedman_chi2(rank_sums, n, k)
    has_ties = any(len(set(row)) != k for row in table)
    n_perms = math.factorial(k) ** n
    if not has_ties and n_perms <= EXACT_FRIEDMAN_LIMIT:
        base = np.array(list(itertools.permutations(range(1, k + 1))), dtype=np.float64)
        count = 0
        for combo in itertools.product(range(base.shape[0]), repeat=n):
            sums = base[list(combo)].sum(axis=0)
            if _friedman_chi2(sums, n, k) >= chi2 - 1e-12:
                count += 1
        p = count / n_perms
        exact = True
    else:
        p = float(st.chi2.sf(chi2, k - 1))
        exact = False
    return StatTestResult(
        test="friedman",
        statistic=chi2,
        df=float(k - 1),
        p_value=p,
        extras={"mean_ranks": [float(r) for r in ranks.mean(axis=0)], "exact": exact},
    )


def nemenyi(
    rank_table: Sequence[Sequence[float]],
    labels: Sequence[str] | None = None,
    alpha: float = 0.05,
) -> StatTestResult:
    """Nemenyi post-hoc on mean ranks.

    Critical difference CD = q_alpha * sqrt(k (k+1) / (6 n)) with
    q_alpha = q(alpha, k, inf) / sqrt(2); a pair is significant when its
    mean-rank gap exceeds CD.
    """
    table = np.asarray(rank_table, dtype=np.float64)
    n, k = table.shape
    if n < 2 or k < 2:
        raise ValueError("need at least 2 blocks and 2 treatments")
    if labels is None:
        labels = [f"treatment{i}" for i in range(k)]
    mean_ranks = _midranks_by_row(table).mean(axis=0)
    se = math.sqrt(k * (k + 1) / (6.0 * n))
    q_crit = float(st.studentized_range.ppf(1.0 - alpha, k, np.inf)) / math.sqrt(2.0)
    cd = q_crit * se
    pairwise = []
    for i, j in itertools.combinations(range(k), 2):
        diff = float(mean_ranks[j] - mean_ranks[i])
        q_obs = abs(diff) / se * math.sqrt(2.0)
        p = float(st.studentized_range.sf(q_obs, k, np.inf))
        pairwise.append(
            PairwiseResult(
                pair=(labels[i], labels[j]),
                mean_diff=diff,
                ci_low=diff - cd,
                ci_high=diff + cd,
                p_value=p,
                significant=abs(diff) > cd,
            )
        )
    fried = friedman(rank_table)
    return StatTestResult(
        test="nemenyi",
        statistic=fried.statistic,
        df=float(k - 1),
        p_value=fried.p_value,
        pairwise=pairwise,
        extras={
            "critical_difference": cd,
            "mean_ranks": [float(r) for r in mean_ranks],
            "alpha": alpha,
        },
    )


def rank_table(values: Sequence[Sequence[float]], higher_is_better: bool = True) -> np.ndarray:
    """Per-row ranks (1 = best) for a datasets x methods metric table."""
    matrix = np.asarray(values, dtype=np.float64)
    oriented = -matrix if higher_is_better else matrix
    return np.vstack([st.rankdata(row) for row in oriented])
