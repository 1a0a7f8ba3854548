"""Thread text -> clean token sets.

Fixed stage order, frozen for reproducibility:

    normalize -> tokenize -> stopwords -> bigrams -> lemmatize -> acronyms
    -> cleanup -> optional corpus-wide TF-IDF filter

All stages are deterministic; the two corpus-global stages (bigrams, TF-IDF
filter) run single-pass over the whole token-set list.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ingest import Thread
from .lemmatizers import Lemmatizer, get_lemmatizer

log = logging.getLogger(__name__)


@dataclass
class TokenSet:
    thread_id: str
    tokens: list[str]


# Cyrillic letters that render like (or transliterate to) Latin ones keep
# sneaking into Reddit text; fold them onto their Latin equivalents.
CYRILLIC_TO_LATIN = {
    "а": "a", "в": "v", "е": "e", "ё": "e", "з": "z", "і": "i", "ї": "i",
    "ј": "j", "к": "k", "м": "m", "н": "n", "о": "o", "р": "p", "с": "c",
    "т": "t", "у": "y", "х": "x", "ѕ": "s",
    "А": "A", "В": "B", "Е": "E", "І": "I", "Ј": "J", "К": "K", "М": "M",
    "Н": "H", "О": "O", "Р": "P", "С": "C", "Т": "T", "У": "Y", "Х": "X",
    "Ѕ": "S",
}
_CYRILLIC_TABLE = str.maketrans(CYRILLIC_TO_LATIN)

_CURLY_QUOTES = str.maketrans("", "", "“”‘’«»„‹›")
_TAG_RE = re.compile(r"<[^>]*>")
_TOKEN_RE = re.compile(r"(?!\d)\w+", re.UNICODE)

# Core English stopword list plus platform noise; "removed" and "deleted"
# are the markers Reddit substitutes for moderated content and must never
# reach the models.
ENGLISH_STOPWORDS = frozenset("""
a about above after again against all am an and any are aren as at be because
been before being below between both but by can cannot could couldn did didn
do does doesn doing don down during each few for from further had hadn has
hasn have haven having he her here hers herself him himself his how i if in
into is isn it its itself just ll me mightn more most mustn my myself needn no
nor not now o of off on once only or other our ours ourselves out over own re
s same shan she should shouldn so some such t than that the their theirs them
themselves then there these they this those through to too under until up ve
very was wasn we were weren what when where which while who whom why will with
won wouldn you your yours yourself yourselves
""".split())

PLATFORM_STOPWORDS = frozenset(
    {
        "removed",
        "deleted",
        "http",
        "https",
        "www",
        "com",
        "org",
        "reddit",
        "subreddit",
        "redditor",
        "upvote",
        "downvote",
        "karma",
        "mods",
        "moderator",
        "amp",
        "nbsp",
        "gt",
        "lt",
        "edit",
        "tldr",
    }
)

DEFAULT_ACRONYMS = {
    "imo": "in my opinion",
    "imho": "in my honest opinion",
    "tbh": "to be honest",
    "afaik": "as far as i know",
    "iirc": "if i recall correctly",
    "idk": "i do not know",
    "fwiw": "for what it is worth",
    "smh": "shaking my head",
    "ftfy": "fixed that for you",
    "til": "today i learned",
}

ALL_POS = frozenset({"NOUN", "ADJ", "VERB", "ADV"})


@dataclass
class PreprocessConfig:
    min_token_len: int = 2
    max_token_len: int = 15
    bigram_min_count: int = 5
    bigram_threshold: float = 10.0
    allowed_pos: frozenset[str] = ALL_POS
    acronym_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_ACRONYMS))
    extra_stopwords: frozenset[str] = frozenset()
    tfidf_filter_quantile: float | None = None
    lemmatizer: dict | str | None = None

    def __post_init__(self):
        if self.min_token_len > self.max_token_len:
            raise ValueError("min_token_len must be <= max_token_len")
        if self.tfidf_filter_quantile is not None and not (
            0.0 <= self.tfidf_filter_quantile <= 1.0
        ):
            raise ValueError("tfidf_filter_quantile must lie in [0, 1]")
        self.allowed_pos = frozenset(self.allowed_pos)
        self.extra_stopwords = frozenset(t.lower() for t in self.extra_stopwords)

    @classmethod
    def from_dict(cls, raw: dict) -> "PreprocessConfig":
        return cls(**raw)


def normalize_text(text: str) -> str:
    """Fold Cyrillic lookalikes to Latin; strip curly quotes and markup tags."""
    text = text.translate(_CYRILLIC_TABLE)
    text = _TAG_RE.sub(" ", text)
    return text.translate(_CURLY_QUOTES)


def tokenize(text: str, config: PreprocessConfig | None = None) -> list[str]:
    """Lowercase word tokens with punctuation stripped and length bounds applied."""
    config = config or PreprocessConfig()
    lo, hi = config.min_token_len, config.max_token_len
    return [t for t in _TOKEN_RE.findall(text.lower()) if lo <= len(t) <= hi]


def remove_stopwords(tokens: Sequence[str], config: PreprocessConfig | None = None) -> list[str]:
    config = config or PreprocessConfig()
    drop = ENGLISH_STOPWORDS | PLATFORM_STOPWORDS | config.extra_stopwords
    return [t for t in tokens if t not in drop]


def bigram_scores(
    token_sets: Sequence[Sequence[str]], config: PreprocessConfig
) -> dict[tuple[str, str], float]:
    """score(a, b) = (count(ab) - min_count) * V / (count(a) * count(b))."""
    unigrams: Counter[str] = Counter()
    pairs: Counter[tuple[str, str]] = Counter()
    for tokens in token_sets:
        unigrams.update(tokens)
        pairs.update(zip(tokens, tokens[1:]))
    vocab_size = len(unigrams)
    scores = {}
    for (a, b), n_ab in pairs.items():
        denom = unigrams[a] * unigrams[b]
        if denom:
            scores[(a, b)] = (n_ab - config.bigram_min_count) * vocab_size / denom
    return scores


def detect_bigrams(
    token_sets: Sequence[TokenSet], config: PreprocessConfig | None = None
) -> list[TokenSet]:
    """Promote adjacent pairs scoring at or above the threshold to "a_b" tokens.

    Replacement is greedy left-to-right and non-overlapping; everything else
    passes through untouched, so flattening promoted tokens on "_" recovers
    the original sequence.
    """
    config = config or PreprocessConfig()
    if not token_sets:
        return []
    scores = bigram_scores([ts.tokens for ts in token_sets], config)
    promoted = {pair for pair, s in scores.items() if s >= config.bigram_threshold}
    out = []
    for ts in token_sets:
        tokens = ts.tokens
        merged: list[str] = []
        i = 0
        while i < len(tokens):
            if i + 1 < len(tokens) and (tokens[i], tokens[i + 1]) in promoted:
                merged.append(f"{tokens[i]}_{tokens[i + 1]}")
                i += 2
            else:
                merged.append(tokens[i])
                i += 1
        out.append(TokenSet(thread_id=ts.thread_id, tokens=merged))
    return out


def lemmatize(
    tokens: Sequence[str],
    config: PreprocessConfig | None = None,
    backend: Lemmatizer | None = None,
) -> list[str]:
    """Replace tokens by their lemmas; drop tokens tagged outside allowed_pos.

    Promoted bigrams ("a_b") are kept verbatim — they already survived the
    earlier per-word stages.
    """
    config = config or PreprocessConfig()
    if backend is None:
        backend = get_lemmatizer(config.lemmatizer)
    out = []
    plain = [t for t in tokens if "_" not in t]
    analyzed = iter(backend.analyze(plain))
    for token in tokens:
        if "_" in token:
            out.append(token)
            continue
        lemma, pos = next(analyzed)
        if pos in config.allowed_pos:
            out.append(lemma)
    return out


def expand_acronyms(tokens: Sequence[str], mapping: dict[str, str] | None = None) -> list[str]:
    mapping = DEFAULT_ACRONYMS if mapping is None else mapping
    out: list[str] = []
    for token in tokens:
        expansion = mapping.get(token)
        if expansion is None:
            out.append(token)
        else:
            out.extend(expansion.split())
    return out


def final_cleanup(tokens: Sequence[str]) -> list[str]:
    """Drop leftover single characters and purely numeric tokens."""
    return [t for t in tokens if len(t) > 1 and not t.isdigit()]


def tfidf_filter(
    token_sets: Sequence[TokenSet], quantile: float
) -> list[TokenSet]:
    """Remove tokens whose maximum TF-IDF across documents falls below the
    given quantile of all per-token maxima.

    The statistic is the per-token maximum (not mean) of raw-count TF-IDF;
    the cut is corpus-wide. Quantile 0.0 is the identity.
    """
    if not (0.0 <= quantile <= 1.0):
        raise ValueError("quantile must lie in [0, 1]")
    if not token_sets:
        return []
    from .models.vocabulary import EmptyCorpusError, tfidf_matrix

    try:
        weights, vocab = tfidf_matrix(
            [ts.tokens for ts in token_sets], l2_normalize=False
        )
    except EmptyCorpusError:
        return [TokenSet(ts.thread_id, list(ts.tokens)) for ts in token_sets]
    maxima = weights.max(axis=0)
    cutoff = float(np.quantile(maxima, quantile))
    keep = {
        vocab.id_to_token[i] for i in range(len(vocab)) if maxima[i] >= cutoff
    }
    return [
        TokenSet(ts.thread_id, [t for t in ts.tokens if t in keep])
        for ts in token_sets
    ]


def preprocess_threads(
    threads: Iterable[Thread],
    config: PreprocessConfig | None = None,
    lemmatizer: Lemmatizer | None = None,
    embedding_path: bool = False,
) -> list[TokenSet]:
    """Run the full pipeline over threads.

    ``embedding_path=True`` marks the run as feeding the embedding model,
    where the legacy TF-IDF filter must not apply: a configured quantile is
    skipped with a warning instead of honored.
    """
    config = config or PreprocessConfig()
    if lemmatizer is None:
        lemmatizer = get_lemmatizer(config.lemmatizer)
    token_sets = []
    for thread in threads:
        tokens = tokenize(normalize_text(thread.text), config)
        tokens = remove_stopwords(tokens, config)
        token_sets.append(TokenSet(thread_id=thread.id, tokens=tokens))
    token_sets = detect_bigrams(token_sets, config)
    out = []
    for ts in token_sets:
        tokens = lemmatize(ts.tokens, config, lemmatizer)
        tokens = expand_acronyms(tokens, config.acronym_map)
        tokens = final_cleanup(tokens)
        out.append(TokenSet(thread_id=ts.thread_id, tokens=tokens))
    if config.tfidf_filter_quantile is not None:
        if embedding_path:
            log.warning(
                "TF-IDF filter configured (quantile=%.2f) but disabled on the "
                "embedding path",
                config.tfidf_filter_quantile,
            )
        else:
            out = tfidf_filter(out, config.tfidf_filter_quantile)
    return out


def save_token_sets(token_sets: Iterable[TokenSet], path: str | Path) -> None:
    payload = [{"thread_id": ts.thread_id, "tokens": ts.tokens} for ts in token_sets]
    Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True))


def load_token_sets(path: str | Path) -> list[TokenSet]:
    payload = json.loads(Path(path).read_text())
    return [TokenSet(thread_id=i["thread_id"], tokens=list(i["tokens"])) for i in payload]
