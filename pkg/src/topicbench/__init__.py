"""topicbench: a topic-model comparison workbench for subreddit archives.

Ingests zstd-compressed NDJSON dumps into discussion threads, preprocesses
them into token sets, trains three topic-model families (Gibbs-sampled
latent topics, nonnegative factorization of TF-IDF, embedding + density
clustering with class-based TF-IDF keywords), scores them with coherence /
diversity / KL-divergence / perplexity / runtime, runs the full statistical
comparison battery, and serves an exploration API for chord-graph browsing
and model ranking.
"""

__version__ = "0.1.0"
