"""Pluggable lemmatizer/POS backends for the token pipeline.

The pipeline only needs one operation: token -> (lemma, coarse POS tag).
The dictionary backend is deterministic and dependency-free, intended for
tests and offline runs; a spaCy backend binds lazily when that package and
an English model are installed.
"""

from __future__ import annotations

from typing import Protocol, Sequence


class PipelineBackendError(RuntimeError):
    pass


class Lemmatizer(Protocol):
    name: str

    def analyze(self, tokens: Sequence[str]) -> list[tuple[str, str]]: ...


# Irregular forms and function words the suffix rules would mangle.
_LEXICON: dict[str, tuple[str, str]] = {
    "running": ("run", "VERB"),
    "ran": ("run", "VERB"),
    "runs": ("run", "VERB"),
    "went": ("go", "VERB"),
    "gone": ("go", "VERB"),
    "made": ("make", "VERB"),
    "said": ("say", "VERB"),
    "got": ("get", "VERB"),
    "better": ("good", "ADJ"),
    "best": ("good", "ADJ"),
    "worse": ("bad", "ADJ"),
    "worst": ("bad", "ADJ"),
    "children": ("child", "NOUN"),
    "people": ("people", "NOUN"),
    "men": ("man", "NOUN"),
    "women": ("woman", "NOUN"),
    "feet": ("foot", "NOUN"),
    "teeth": ("tooth", "NOUN"),
    "mice": ("mouse", "NOUN"),
    "i": ("i", "PRON"),
    "you": ("you", "PRON"),
    "he": ("he", "PRON"),
    "she": ("she", "PRON"),
    "it": ("it", "PRON"),
    "we": ("we", "PRON"),
    "they": ("they", "PRON"),
    "them": ("they", "PRON"),
    "their": ("their", "PRON"),
    "this": ("this", "DET"),
    "that": ("that", "DET"),
    "these": ("this", "DET"),
    "those": ("that", "DET"),
    "a": ("a", "DET"),
    "an": ("a", "DET"),
    "the": ("the", "DET"),
    "and": ("and", "CONJ"),
    "or": ("or", "CONJ"),
    "but": ("but", "CONJ"),
    "of": ("of", "ADP"),
    "in": ("in", "ADP"),
    "on": ("on", "ADP"),
    "at": ("at", "ADP"),
    "to": ("to", "ADP"),
    "for": ("for", "ADP"),
    "with": ("with", "ADP"),
    "is": ("be", "VERB"),
    "are": ("be", "VERB"),
    "was": ("be", "VERB"),
    "were": ("be", "VERB"),
    "be": ("be", "VERB"),
    "been": ("be", "VERB"),
    "has": ("have", "VERB"),
    "have": ("have", "VERB"),
    "had": ("have", "VERB"),
    "quickly": ("quickly", "ADV"),
    "very": ("very", "ADV"),
    "really": ("really", "ADV"),
    "not": ("not", "ADV"),
}

_ADV_SUFFIX = "ly"


class DictionaryLemmatizer:
    """Deterministic rule + lexicon backend.

    Unknown tokens default to nouns kept verbatim; a few conservative suffix
    rules cover regular plurals, gerunds, and -ly adverbs. Accuracy is not
    the point — stability is.
    """

    name = "dictionary"

    def __init__(self, extra_lexicon: dict[str, tuple[str, str]] | None = None):
        self._lexicon = dict(_LEXICON)
        if extra_lexicon:
            self._lexicon.update(extra_lexicon)

    def _one(self, token: str) -> tuple[str, str]:
        hit = self._lexicon.get(token)
        if hit is not None:
            return hit
        if token.endswith("ies") and len(token) > 4:
            return token[:-3] + "y", "NOUN"
        if token.endswith("sses") or token.endswith("shes") or token.endswith("ches"):
            return token[:-2], "NOUN"
        if token.endswith("ing") and len(token) > 5:
            stem = token[:-3]
            if len(stem) > 2 and stem[-1] == stem[-2]:  # e.g. swimming -> swim
                stem = stem[:-1]
            return stem, "VERB"
        if token.endswith("ed") and len(token) > 4:
            return token[:-2], "VERB"
        if token.endswith(_ADV_SUFFIX) and len(token) > 4:
            return token, "ADV"
        if token.endswith("s") and not token.endswith("ss") and len(token) > 3:
            return token[:-1], "NOUN"
        return token, "NOUN"

    def analyze(self, tokens: Sequence[str]) -> list[tuple[str, str]]:
        return [self._one(t) for t in tokens]


class SpacyLemmatizer:  # pragma: no cover - optional heavy backend
    name = "spacy"

    def __init__(self, model: str = "en_core_web_sm"):
        try:
            import spacy
        except ImportError as exc:
            raise PipelineBackendError(
                "lemmatize stage: spaCy backend requested but spacy is not installed"
            ) from exc
        try:
            self._nlp = spacy.load(model, disable=["parser", "ner"])
        except OSError as exc:
            raise PipelineBackendError(
                f"lemmatize stage: spaCy model {model!r} is not available"
            ) from exc

    def analyze(self, tokens: Sequence[str]) -> list[tuple[str, str]]:
        doc = self._nlp(" ".join(tokens))
        return [(t.lemma_.lower(), t.pos_) for t in doc]


def get_lemmatizer(spec: dict | str | None = None) -> Lemmatizer:
    if spec is None:
        return DictionaryLemmatizer()
    if isinstance(spec, str):
        spec = {"backend": spec}
    spec = dict(spec)
    backend = spec.pop("backend", "dictionary")
    if backend == "dictionary":
        return DictionaryLemmatizer(**spec)
    if backend == "spacy":
        return SpacyLemmatizer(**spec)
    raise PipelineBackendError(f"lemmatize stage: unknown backend {backend!r}")
