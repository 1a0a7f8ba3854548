from .vocabulary import BowCorpus, Vocabulary, build_vocabulary, bow_corpus, tfidf_matrix
from .result import TopicInfo, TopicModelResult
from .lda import LdaConfig, train_lda
from .nmf import NmfConfig, train_nmf
from .ctfidf import compute_ctfidf
from .embedding import EmbedClusterConfig, train_embed_cluster
from .selection import SweepResult, MedianResult, choose_topics_by_coherence, choose_topics_median

__all__ = [
    "BowCorpus",
    "Vocabulary",
    "build_vocabulary",
    "bow_corpus",
    "tfidf_matrix",
    "TopicInfo",
    "TopicModelResult",
    "LdaConfig",
    "train_lda",
    "NmfConfig",
    "train_nmf",
    "compute_ctfidf",
    "EmbedClusterConfig",
    "train_embed_cluster",
    "SweepResult",
    "MedianResult",
    "choose_topics_by_coherence",
    "choose_topics_median",
]
