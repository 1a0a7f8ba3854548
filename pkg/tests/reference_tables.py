"""Benchmark metric tables for the twelve-subreddit, three-method comparison.

These five tables are the fixed inputs of the statistical acceptance suite;
per-column summary targets are the printed mean/min/max rows that the
``describe`` oracle must reproduce at printed precision. ``PRINTED``
summaries are (value, decimals) pairs so the matcher knows each cell's
precision.
"""

METHODS = ["lda", "nmf", "embed"]

DATASETS = [
    "disabledgamers",
    "MachineLearning",
    "HermanCainAward",
    "cybersecurity",
    "emergencymedicine",
    "SustainableFashion",
    "LanguageTechnology",
    "nutrition",
    "uwaterloo",
    "Coronavirus",
    "bipolar",
    "CoronavirusCanada",
]

NUMBER_OF_TOPICS = {
    "lda": [10, 10, 40, 35, 30, 15, 30, 10, 15, 10, 45, 10],
    "nmf": [5, 5, 40, 5, 50, 10, 20, 5, 10, 10, 10, 15],
    "embed": [22, 56, 131, 142, 20, 35, 78, 27, 43, 133, 56, 62],
}

TOPIC_COHERENCE = {
    "lda": [0.494, 0.475, 0.456, 0.520, 0.460, 0.386, 0.474, 0.543, 0.507, 0.564, 0.543, 0.584],
    "nmf": [0.667, 0.721, 0.544, 0.714, 0.527, 0.573, 0.599, 0.849, 0.706, 0.748, 0.819, 0.746],
    "embed": [0.639, 0.649, 0.575, 0.687, 0.623, 0.685, 0.596, 0.683, 0.695, 0.683, 0.573, 0.670],
}

TOPIC_DIVERSITY = {
    "lda": [0.680, 0.770, 0.723, 0.751, 0.673, 0.653, 0.700, 0.800, 0.773, 0.750, 0.727, 0.800],
    "nmf": [0.920, 0.880, 0.828, 0.900, 0.796, 0.880, 0.900, 0.900, 0.870, 0.920, 0.920, 0.920],
    "embed": [0.967, 1.000, 0.990, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000, 1.000, 0.992, 1.000],
}

KL_DIVERGENCE = {
    "lda": [0.020, 0.095, 0.109, 0.093, 0.048, 0.125, 0.144, 0.027, 0.194, 0.032, 0.066, 0.136],
    "nmf": [7.956, 8.397, 10.166, 9.479, 11.766, 11.042, 9.607, 7.298, 8.856, 9.981, 10.475, 9.277],
    "embed": [0.004, 0.003, 0.027, 0.002, 0.014, 0.012, 0.001, 0.003, 0.013, 0.002, 0.001, 0.004],
}

EXECUTION_TIME = {
    "lda": [280, 1329, 3178, 933, 452, 200, 1034, 333, 531, 1575, 730, 1587],
    "nmf": [51, 74, 836, 136, 101, 53, 62, 68, 56, 91, 88, 180],
    "embed": [173, 701, 2891, 1190, 274, 153, 408, 599, 262, 767, 653, 1178],
}

TABLES = {
    "number_of_topics": NUMBER_OF_TOPICS,
    "topic_coherence": TOPIC_COHERENCE,
    "topic_diversity": TOPIC_DIVERSITY,
    "kl_divergence": KL_DIVERGENCE,
    "execution_time": EXECUTION_TIME,
}

# Printed summary rows: {table: {column: {"mean": (value, decimals), ...}}}.
# The diversity NMF mean is printed as 0.866 in the source summary row, but
# the twelve rows above it compute to 0.886 and the source's own pairwise
# analysis (diffs 0.1096 and 0.152) only follows from 0.886; the summary cell
# is a typo, so the recomputed value is the oracle here.
PRINTED = {
    "number_of_topics": {
        "lda": {"mean": (22, 0), "min": (10, 0), "max": (45, 0)},
        "nmf": {"mean": (15, 0), "min": (5, 0), "max": (50, 0)},
        "embed": {"mean": (67, 0), "min": (20, 0), "max": (142, 0)},
    },
    "topic_coherence": {
        "lda": {"mean": (0.500, 3), "min": (0.386, 3), "max": (0.584, 3)},
        "nmf": {"mean": (0.684, 3), "min": (0.527, 3), "max": (0.849, 3)},
        "embed": {"mean": (0.647, 3), "min": (0.573, 3), "max": (0.695, 3)},
    },
    "topic_diversity": {
        "lda": {"mean": (0.733, 3), "min": (0.653, 3), "max": (0.800, 3)},
        "nmf": {"mean": (0.886, 3), "min": (0.796, 3), "max": (0.920, 3)},
        "embed": {"mean": (0.995, 3), "min": (0.967, 3), "max": (1.000, 3)},
    },
    "kl_divergence": {
        "lda": {"mean": (0.090, 3), "min": (0.020, 3), "max": (0.194, 3)},
        "nmf": {"mean": (9.52, 2), "min": (7.298, 3), "max": (11.766, 3)},
        "embed": {"mean": (0.007, 3), "min": (0.001, 3), "max": (0.027, 3)},
    },
    "execution_time": {
        "lda": {"mean": (1013, 0), "min": (200, 0), "max": (3178, 0)},
        "nmf": {"mean": (149, 0), "min": (51, 0), "max": (836, 0)},
        "embed": {"mean": (771, 0), "min": (153, 0), "max": (2891, 0)},
    },
}


def matches_printed(computed: float, printed: float, decimals: int) -> bool:
    """True when `printed` is a faithful rendering of `computed` at the given
    precision: either round-half or truncation (the summary rows mix both)."""
    ulp = 10.0 ** (-decimals)
    delta = computed - printed
    return -0.5 * ulp - 1e-9 <= delta < ulp
