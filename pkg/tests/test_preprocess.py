import pytest
from hypothesis import given
from hypothesis import strategies as st

from topicbench.ingest import Thread
from topicbench.lemmatizers import DictionaryLemmatizer, PipelineBackendError, get_lemmatizer
from topicbench.preprocess import (
    PreprocessConfig,
    TokenSet,
    bigram_scores,
    detect_bigrams,
    expand_acronyms,
    final_cleanup,
    lemmatize,
    load_token_sets,
    normalize_text,
    preprocess_threads,
    remove_stopwords,
    save_token_sets,
    tfidf_filter,
    tokenize,
)


class TestNormalize:
    def test_ascii_unchanged(self):
        assert normalize_text("hello") == "hello"

    def test_cyrillic_lookalike_mapped(self):
        assert normalize_text("сafe") == "cafe"  # Cyrillic es

    def test_curly_quotes_stripped(self):
        assert normalize_text("“quoted”") == "quoted"

    def test_markup_tags_removed(self):
        assert tokenize(normalize_text("<b>bold</b> word")) == ["bold", "word"]


class TestTokenize:
    def test_punctuation_and_case(self):
        assert tokenize("Hello, World!") == ["hello", "world"]

    def test_length_floor(self):
        assert tokenize("a b") == []

    def test_length_ceiling(self):
        assert tokenize("x" * 34 + " word") == ["word"]

    def test_leading_digit_dropped(self):
        assert tokenize("2nd place a1") == ["nd", "place", "a1"]


class TestStopwords:
    def test_removed_and_deleted_absent(self):
        assert remove_stopwords(["the", "removed", "apple"]) == ["apple"]
        assert remove_stopwords(["deleted", "banana"]) == ["banana"]

    def test_empty(self):
        assert remove_stopwords([]) == []

    def test_extra_stopwords_config(self):
        config = PreprocessConfig(extra_stopwords=frozenset({"upvote"}))
        assert remove_stopwords(["upvote", "cake"], config) == ["cake"]


class TestBigrams:
    def test_scoring_formula(self):
        # count(ab)=50, count(a)=60, count(b)=55, V=1000 -> 13.64
        assert (50 - 5) * 1000 / (60 * 55) == pytest.approx(13.636, abs=1e-3)

    def test_promotion_on_synthetic_corpus(self):
        # "data science" always adjacent; 20 unique fillers per doc push the
        # vocabulary to 602, so score = (30-5)*602/(30*30) = 16.7 >= 10.
        sets = [
            TokenSet(f"t{i}", ["data", "science"] + [f"f{i}x{j}" for j in range(20)])
            for i in range(30)
        ]
        config = PreprocessConfig(bigram_min_count=5, bigram_threshold=10.0)
        scores = bigram_scores([ts.tokens for ts in sets], config)
        assert scores[("data", "science")] == pytest.approx(25 * 602 / 900)
        out = detect_bigrams(sets, config)
        assert out[0].tokens[0] == "data_science"

    def test_rare_pair_unchanged(self):
        sets = [TokenSet("a", ["rare", "pair"])] + [
            TokenSet(f"b{i}", [f"w{i}", f"v{i}"]) for i in range(10)
        ]
        out = detect_bigrams(sets, PreprocessConfig())
        assert out[0].tokens == ["rare", "pair"]

    def test_empty_corpus(self):
        assert detect_bigrams([], PreprocessConfig()) == []

    def test_flattening_recovers_sequence(self):
        sets = [
            TokenSet(f"t{i}", ["data", "science"] + [f"f{i}x{j}" for j in range(20)])
            for i in range(30)
        ]
        out = detect_bigrams(sets, PreprocessConfig())
        assert any("_" in tok for ts in out for tok in ts.tokens)
        for before, after in zip(sets, out):
            flat = []
            for tok in after.tokens:
                flat.extend(tok.split("_") if "_" in tok else [tok])
            assert flat == before.tokens


class TestLemmatize:
    def test_dictionary_backend(self):
        assert lemmatize(["running"]) == ["run"]

    def test_noun_identity(self):
        assert lemmatize(["apple"]) == ["apple"]

    def test_pronoun_dropped(self):
        assert lemmatize(["they"]) == []

    def test_unknown_backend_raises(self):
        with pytest.raises(PipelineBackendError, match="lemmatize stage"):
            get_lemmatizer("no-such-backend")

    def test_pos_restriction_config(self):
        config = PreprocessConfig(allowed_pos=frozenset({"NOUN"}))
        assert lemmatize(["running", "apple"], config) == ["apple"]


class TestAcronyms:
    def test_imo(self):
        assert expand_acronyms(["imo"]) == ["in", "my", "opinion"]

    def test_tbh(self):
        assert expand_acronyms(["tbh"]) == ["to", "be", "honest"]

    def test_passthrough(self):
        assert expand_acronyms(["banana"]) == ["banana"]


class TestCleanup:
    def test_single_chars_and_digits(self):
        assert final_cleanup(["x", "42", "word"]) == ["word"]

    def test_empty(self):
        assert final_cleanup([]) == []

    def test_mixed_alphanumerics_kept(self):
        assert final_cleanup(["a1", "2b"]) == ["a1", "2b"]


class TestTfidfFilter:
    def test_quantile_zero_identity(self):
        sets = [TokenSet("a", ["x", "y"]), TokenSet("b", ["y", "z"])]
        out = tfidf_filter(sets, 0.0)
        assert [ts.tokens for ts in out] == [["x", "y"], ["y", "z"]]

    def test_dominant_term_survives_quartile_cut(self):
        # Brute-force oracle (hand-applied formula): maxima are
        # apple 5.749, banana 1.223, cherry 1.511, date 1.511; the 0.75
        # quantile (2.570) keeps only "apple".
        sets = [
            TokenSet("d0", ["apple", "apple", "apple", "banana"]),
            TokenSet("d1", ["banana", "cherry"]),
            TokenSet("d2", ["cherry", "date"]),
            TokenSet("d3", ["date", "banana"]),
        ]
        out = tfidf_filter(sets, 0.75)
        surviving = {t for ts in out for t in ts.tokens}
        assert surviving == {"apple"}

    def test_embedding_path_skips_filter(self, caplog):
        threads = [Thread(id="t", text="alpha beta gamma delta")] * 3
        config = PreprocessConfig(tfidf_filter_quantile=0.75)
        with caplog.at_level("WARNING"):
            out = preprocess_threads(threads, config, embedding_path=True)
        assert any("disabled on the embedding path" in m for m in caplog.messages)
        assert all(ts.tokens for ts in out)


class TestPipeline:
    def test_deterministic(self, fixture_threads):
        config = PreprocessConfig()
        a = preprocess_threads(fixture_threads, config)
        b = preprocess_threads(fixture_threads, config)
        assert [(x.thread_id, x.tokens) for x in a] == [(y.thread_id, y.tokens) for y in b]

    def test_no_stopwords_in_output(self, fixture_threads):
        out = preprocess_threads(fixture_threads, PreprocessConfig())
        for ts in out:
            for token in ts.tokens:
                assert token not in {"removed", "deleted", "the", "and"}

    def test_round_trip_serialization(self, fixture_threads, tmp_path):
        out = preprocess_threads(fixture_threads, PreprocessConfig())
        path = tmp_path / "tokensets.json"
        save_token_sets(out, path)
        loaded = load_token_sets(path)
        assert [(x.thread_id, x.tokens) for x in out] == [
            (y.thread_id, y.tokens) for y in loaded
        ]

    @given(st.text(max_size=200))
    def test_tokens_obey_bounds_or_are_composites(self, text):
        config = PreprocessConfig()
        threads = [Thread(id="t", text=text)]
        out = preprocess_threads(threads, config)
        expansion_words = {w for v in config.acronym_map.values() for w in v.split()}
        for token in out[0].tokens:
            ok_len = 2 <= len(token) <= config.max_token_len
            assert ok_len or "_" in token or token in expansion_words

    def test_config_invariants(self):
        with pytest.raises(ValueError):
            PreprocessConfig(min_token_len=9, max_token_len=3)
        with pytest.raises(ValueError):
            PreprocessConfig(tfidf_filter_quantile=1.5)


def test_dictionary_lemmatizer_regularities():
    backend = DictionaryLemmatizer()
    analyzed = dict(zip(["cats", "stories", "swimming"], backend.analyze(["cats", "stories", "swimming"])))
    assert analyzed == {
        "cats": ("cat", "NOUN"),
        "stories": ("story", "NOUN"),
        "swimming": ("swim", "VERB"),
    }
