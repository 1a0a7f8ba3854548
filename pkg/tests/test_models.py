import numpy as np
import pytest

import topicbench.models.lda as lda_mod
from topicbench.models import (
    EmbedClusterConfig,
    LdaConfig,
    NmfConfig,
    TopicModelResult,
    bow_corpus,
    build_vocabulary,
    compute_ctfidf,
    tfidf_matrix,
    train_embed_cluster,
    train_lda,
    train_nmf,
)
from topicbench.models.lda import _gibbs_pass_nb, _gibbs_pass_py
from topicbench.models.vocabulary import EmptyCorpusError
from topicbench.embedders import HashedProjectionEmbedder, get_embedder


def _random_docs(n_docs=60, vocab=30, length=25, seed=0):
    rng = np.random.default_rng(seed)
    return [
        [f"w{int(w)}" for w in rng.integers(0, vocab, size=length)] for _ in range(n_docs)
    ]


def _planted_two_topic_corpus(seed=123, n_docs=500, vocab_size=50):
    rng = np.random.default_rng(seed)
    half = vocab_size // 2
    planted = np.zeros((2, vocab_size))
    planted[0, :half] = rng.random(half) + 0.5
    planted[1, half:] = rng.random(vocab_size - half) + 0.5
    planted /= planted.sum(axis=1, keepdims=True)
    docs = []
    for _ in range(n_docs):
        mix = rng.dirichlet([0.4, 0.4])
        length = int(rng.integers(30, 60))
        topics = rng.choice(2, size=length, p=mix)
        docs.append(
            [f"tok{int(rng.choice(vocab_size, p=planted[z])):02d}" for z in topics]
        )
    return docs, planted


def greedy_match_cosines(planted, learned, vocab, vocab_size=50):
    order = [vocab.token_to_id[f"tok{w:02d}"] for w in range(vocab_size)]
    rows = learned[:, order]

    def cosine(u, v):
        return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))

    remaining = set(range(rows.shape[0]))
    out = []
    for p in range(planted.shape[0]):
        best = max(remaining, key=lambda k: cosine(planted[p], rows[k]))
        out.append(cosine(planted[p], rows[best]))
        remaining.discard(best)
    return out


class TestVocabulary:
    def test_basic_ids_and_df(self):
        vocab = build_vocabulary([["a", "b"], ["b", "c"]])
        assert len(vocab) == 3
        assert vocab.df("b") == 2

    def test_df_counts_documents_not_occurrences(self):
        vocab = build_vocabulary([["a", "a"]])
        assert len(vocab) == 1
        assert vocab.df("a") == 1

    def test_df_matches_brute_force(self):
        docs = [["x", "y", "x"], ["y", "z"], ["z", "z", "x"]]
        vocab = build_vocabulary(docs)
        for token in ("x", "y", "z"):
            brute = sum(1 for d in docs if token in d)
            assert vocab.df(token) == brute

    def test_empty_corpus_raises(self):
        with pytest.raises(EmptyCorpusError, match="empty corpus"):
            build_vocabulary([[], []])

    def test_bow_counts(self):
        vocab = build_vocabulary([["a", "b", "a"]])
        corpus = bow_corpus([["a", "b", "a"]], vocab)
        assert corpus == [[(0, 2), (1, 1)]]


class TestLda:
    def test_single_topic_degeneracy(self):
        docs = _random_docs(20, vocab=10, seed=3)
        vocab = build_vocabulary(docs)
        corpus = bow_corpus(docs, vocab)
        result = train_lda(corpus, vocab, LdaConfig(num_topics=1, passes=2, seed=0, eta=0.01))
        assert np.allclose(result.doc_topic, 1.0)
        counts = np.zeros(len(vocab))
        for doc in corpus:
            for t, c in doc:
                counts[t] += c
        smoothed = (counts + 0.01) / (counts.sum() + 0.01 * len(vocab))
        assert np.allclose(result.topic_word[0], smoothed, atol=1e-12)

    def test_planted_recovery(self):
        docs, planted = _planted_two_topic_corpus()
        vocab = build_vocabulary(docs)
        corpus = bow_corpus(docs, vocab)
        result = train_lda(corpus, vocab, LdaConfig(num_topics=2, passes=60, seed=11))
        cosines = greedy_match_cosines(planted, result.topic_word, vocab)
        assert min(cosines) >= 0.9

    def test_seeded_determinism(self):
        docs = _random_docs(seed=5)
        vocab = build_vocabulary(docs)
        corpus = bow_corpus(docs, vocab)
        config = LdaConfig(num_topics=3, passes=15, seed=21)
        a = train_lda(corpus, vocab, config)
        b = train_lda(corpus, vocab, LdaConfig(num_topics=3, passes=15, seed=21))
        assert a.keyword_lists() == b.keyword_lists()
        assert a.to_json() == b.to_json()

    def test_simplex_invariants(self):
        docs = _random_docs(seed=8)
        vocab = build_vocabulary(docs)
        corpus = bow_corpus(docs, vocab)
        result = train_lda(corpus, vocab, LdaConfig(num_topics=4, passes=10, seed=2))
        assert np.allclose(result.doc_topic.sum(axis=1), 1.0, atol=1e-6)
        assert np.allclose(result.topic_word.sum(axis=1), 1.0, atol=1e-6)
        for topic in result.topics:
            weights = [x for _, x in topic.keywords]
            assert weights == sorted(weights, reverse=True)

    def test_k_above_documents_rejected(self):
        docs = _random_docs(4)
        vocab = build_vocabulary(docs)
        corpus = bow_corpus(docs, vocab)
        with pytest.raises(ValueError, match="exceeds document count"):
            train_lda(corpus, vocab, LdaConfig(num_topics=5))

    def test_kernel_paths_agree_bitwise(self):
        rng = np.random.default_rng(5)
        n_docs, vocab_size, k, n_tokens = 20, 15, 3, 400
        token_doc = np.sort(rng.integers(0, n_docs, n_tokens)).astype(np.int64)
        token_word = rng.integers(0, vocab_size, n_tokens).astype(np.int64)
        z0 = rng.integers(0, k, n_tokens).astype(np.int64)
        uniforms = rng.random(n_tokens)
        eta = np.full(vocab_size, 1.0 / k)

        def run(kernel):
            z = z0.copy()
            n_dk = np.zeros((n_docs, k))
            n_kw = np.zeros((k, vocab_size))
            n_k = np.zeros(k)
            np.add.at(n_dk, (token_doc, z), 1.0)
            np.add.at(n_kw, (z, token_word), 1.0)
            np.add.at(n_k, z, 1.0)
            for _ in range(5):
                kernel(token_doc, token_word, z, n_dk, n_kw, n_k,
                       1.0 / k, eta, float(eta.sum()), uniforms)
            return z, n_dk, n_kw

        z_py, dk_py, kw_py = run(_gibbs_pass_py)
        z_nb, dk_nb, kw_nb = run(_gibbs_pass_nb)
        assert np.array_equal(z_py, z_nb)
        assert np.array_equal(dk_py, dk_nb)
        assert np.array_equal(kw_py, kw_nb)

    def test_fallback_path_full_training_matches(self, monkeypatch):
        docs = _random_docs(30, vocab=12, length=15, seed=9)
        vocab = build_vocabulary(docs)
        corpus = bow_corpus(docs, vocab)
        config = LdaConfig(num_topics=2, passes=12, seed=4)
        fast = train_lda(corpus, vocab, config)
        monkeypatch.setattr(lda_mod, "NUMBA_ENABLED", False)
        slow = train_lda(corpus, vocab, config)
        assert fast.to_json() == slow.to_json()


class TestNmf:
    def test_rank_one_reconstruction(self):
        matrix = np.array([[1.0, 2.0], [2.0, 4.0]])
        result = train_nmf(matrix, ["a", "b"], NmfConfig(num_topics=1, max_iter=500, tol=1e-12))
        err = result.diagnostics["objective"][-1] / np.linalg.norm(matrix)
        assert err < 1e-3

    def test_objective_monotone_nonincreasing(self):
        rng = np.random.default_rng(2)
        matrix = rng.random((25, 12))
        result = train_nmf(matrix, [f"w{i}" for i in range(12)], NmfConfig(num_topics=4, seed=7))
        objective = result.diagnostics["objective"]
        for prev, curr in zip(objective, objective[1:]):
            assert curr <= prev * (1 + 1e-12) + 1e-12

    def test_factors_nonnegative(self):
        rng = np.random.default_rng(3)
        matrix = rng.random((15, 8))
        result = train_nmf(matrix, [f"w{i}" for i in range(8)], NmfConfig(num_topics=3, seed=1))
        assert (result.topic_word >= 0).all()
        assert (result.doc_topic >= 0).all()

    def test_byte_identical_artifacts_under_seed(self, tmp_path):
        rng = np.random.default_rng(4)
        matrix = rng.random((20, 10))
        vocab = [f"w{i}" for i in range(10)]
        a = train_nmf(matrix, vocab, NmfConfig(num_topics=3, seed=42))
        b = train_nmf(matrix, vocab, NmfConfig(num_topics=3, seed=42))
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        a.save(pa)
        b.save(pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_negative_entry_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            train_nmf(np.array([[1.0, -0.5]]), ["a", "b"], NmfConfig(num_topics=1))

    def test_k_above_rank_bound_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            train_nmf(np.ones((3, 2)), ["a", "b"], NmfConfig(num_topics=3))

    def test_sparse_input_matches_dense(self):
        import scipy.sparse as sp

        rng = np.random.default_rng(6)
        dense = rng.random((12, 6))
        dense[dense < 0.5] = 0.0
        vocab = [f"w{i}" for i in range(6)]
        a = train_nmf(dense, vocab, NmfConfig(num_topics=2, seed=3))
        b = train_nmf(sp.csr_matrix(dense), vocab, NmfConfig(num_topics=2, seed=3))
        assert np.allclose(a.topic_word, b.topic_word, atol=1e-8)


class TestCtfidf:
    def test_hand_computed_weight(self):
        # classes A={x:2, y:2}, B={y:4}: A_mean=4, f(x)=2 -> 2*ln(3)
        counts = np.array([[2.0, 2.0], [0.0, 4.0]])
        weights = compute_ctfidf(counts)
        assert weights[0, 0] == pytest.approx(2 * np.log(3), abs=1e-9)

    def test_absent_word_weight_zero(self):
        counts = np.array([[2.0, 0.0], [1.0, 3.0]])
        weights = compute_ctfidf(counts)
        assert weights[0, 1] == 0.0

    def test_single_class(self):
        counts = np.array([[3.0, 1.0]])
        weights = compute_ctfidf(counts)
        # A = total words = 4; f == tf for a single class
        assert weights[0, 0] == pytest.approx(3 * np.log(1 + 4 / 3), abs=1e-9)
        assert weights[0, 1] == pytest.approx(1 * np.log(1 + 4 / 1), abs=1e-9)

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError, match="all-zero"):
            compute_ctfidf(np.zeros((2, 3)))


class TestEmbedCluster:
    def test_three_planted_blobs(self, blob_texts):
        config = EmbedClusterConfig(seed=3)
        result = train_embed_cluster(blob_texts, config, HashedProjectionEmbedder(seed=3))
        assert result.num_topics == 3
        assert sorted(t.size for t in result.topics) == [50, 50, 50]
        top_words = {t.keywords[0][0] for t in result.topics}
        assert top_words == {"alpha", "beta", "gamma"}

    def test_below_min_cluster_size_all_outliers(self):
        texts = [f"word{i} thing{i}" for i in range(10)]
        config = EmbedClusterConfig(min_cluster_size=15, seed=0)
        result = train_embed_cluster(texts, config, HashedProjectionEmbedder(seed=0))
        assert result.num_topics == 0
        assert (result.doc_labels == -1).all()

    def test_seeded_determinism(self, blob_texts):
        config = EmbedClusterConfig(seed=9)
        embedder = HashedProjectionEmbedder(seed=9)
        a = train_embed_cluster(blob_texts, config, embedder)
        b = train_embed_cluster(blob_texts, config, HashedProjectionEmbedder(seed=9))
        assert a.to_json() == b.to_json()

    def test_topic_sizes_respect_cluster_floor(self, blob_texts):
        config = EmbedClusterConfig(seed=1)
        result = train_embed_cluster(blob_texts, config, HashedProjectionEmbedder(seed=1))
        for topic in result.topics:
            assert topic.size >= config.min_cluster_size
        assert all(t.topic_id != -1 for t in result.topics)

    def test_auto_merge_joins_near_duplicate_clusters(self):
        # Two lexically identical blobs must merge under "auto"; the third stays.
        rng = np.random.default_rng(11)
        texts = []
        for marker, n in (("red", 40), ("red", 40), ("blue", 40)):
            pool = [f"{marker}term{j}" for j in range(6)]
            for _ in range(n):
                texts.append(" ".join([marker] * 3 + list(rng.choice(pool, size=6))))
        config = EmbedClusterConfig(seed=2, min_cluster_size=10)
        embedder = HashedProjectionEmbedder(seed=2)
        merged = train_embed_cluster(texts, config, embedder)
        kept = train_embed_cluster(
            texts,
            EmbedClusterConfig(seed=2, min_cluster_size=10, nr_topics=None),
            embedder,
        )
        assert merged.num_topics <= kept.num_topics
        markers = {t.keywords[0][0] for t in merged.topics}
        assert markers == {"red", "blue"}

    def test_empty_texts_rejected(self):
        with pytest.raises(ValueError):
            train_embed_cluster([], EmbedClusterConfig(), HashedProjectionEmbedder())

    def test_n_components_must_fit_embedding_dim(self, blob_texts):
        config = EmbedClusterConfig(n_components=64, seed=0)
        with pytest.raises(ValueError, match="embedding dimension"):
            train_embed_cluster(blob_texts, config, HashedProjectionEmbedder(dim=64))

    def test_min_cluster_size_floor(self):
        with pytest.raises(ValueError):
            EmbedClusterConfig(min_cluster_size=1)


class TestResultSerialization:
    def test_round_trip(self, blob_texts):
        result = train_embed_cluster(
            blob_texts, EmbedClusterConfig(seed=5), HashedProjectionEmbedder(seed=5)
        )
        reloaded = TopicModelResult.from_dict(result.to_dict())
        assert reloaded.to_json() == result.to_json()

    def test_tfidf_matrix_shapes_and_norms(self):
        docs = [["a", "b", "a"], ["b", "c"]]
        weights, vocab = tfidf_matrix(docs)
        assert weights.shape == (2, 3)
        assert np.allclose(np.linalg.norm(weights, axis=1), 1.0)

    def test_embedder_registry(self):
        embedder = get_embedder({"backend": "hashed-projection", "dim": 32, "seed": 1})
        assert embedder.dim == 32
        with pytest.raises(ValueError):
            get_embedder({"backend": "unknown"})
