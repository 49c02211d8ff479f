"""Tokenization, stemming and n-gram extraction for documents and references.

Inputs are pre-split: one sentence of plain text per item. Word lengths of
sentences are counted before stopword removal, since length budgets apply to
the emitted summary text rather than to the scored content words.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from nltk.stem.porter import PorterStemmer

from .rouge import NGramMultiset

_STEMMER = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

LENGTH_MODES = ("raw", "tokens")
REFERENCE_NGRAM_MODES = ("sentence", "joined")


@dataclass(frozen=True)
class PreprocessConfig:
    """Preprocessing switches.

    ``length`` selects how sentence word length is measured: ``"raw"`` counts
    words before stopword removal, ``"tokens"`` counts retained tokens.
    ``reference_ngrams`` controls whether reference n-grams are taken within
    each reference sentence or across the concatenated reference text.
    """

    n: int = 1
    stemming: bool = True
    stopword_removal: bool = False
    stopwords: frozenset = frozenset()
    lowercase: bool = True
    length: str = "raw"
    reference_ngrams: str = "sentence"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n-gram order must be >= 1, got {self.n}")
        if self.length not in LENGTH_MODES:
            raise ValueError(f"length must be one of {LENGTH_MODES}")
        if self.reference_ngrams not in REFERENCE_NGRAM_MODES:
            raise ValueError(f"reference_ngrams must be one of {REFERENCE_NGRAM_MODES}")

    @classmethod
    def for_order(cls, n: int, stopwords: Iterable[str] | None = None, **overrides):
        """Defaults for ROUGE_n: stopwords removed for n=1, kept otherwise."""
        words = frozenset(default_stopwords() if stopwords is None else stopwords)
        overrides.setdefault("stopword_removal", n == 1)
        return cls(n=n, stopwords=words, **overrides)


@dataclass(frozen=True)
class Sentence:
    id: int
    tokens: tuple
    raw_word_count: int
    text: str = ""
    doc: int = 0

    def length(self, mode: str = "raw") -> int:
        return self.raw_word_count if mode == "raw" else len(self.tokens)


@dataclass(frozen=True)
class DocumentSet:
    sentences: tuple

    def __post_init__(self):
        for i, s in enumerate(self.sentences):
            if s.id != i:
                raise ValueError(f"sentence ids must be 0..|D|-1 in order, got {s.id} at {i}")

    def __len__(self):
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def __getitem__(self, i):
        return self.sentences[i]

    def lengths(self, mode: str = "raw") -> list[int]:
        return [s.length(mode) for s in self.sentences]


@dataclass(frozen=True)
class ReferenceSummary:
    id: int
    sentences: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not any(self.sentences):
            raise ValueError(f"reference {self.id} has no non-empty sentence")


def _strip_edges(word: str) -> str:
    start, end = 0, len(word)
    while start < end and unicodedata.category(word[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(word[end - 1]).startswith("P"):
        end -= 1
    return word[start:end]


def tokenize(raw_sentence: str, lowercase: bool = True) -> list[str]:
    """Split on whitespace and strip punctuation from token edges.

    >>> tokenize("The cat sat.")
    ['the', 'cat', 'sat']
    """
    if lowercase:
        raw_sentence = raw_sentence.lower()
    tokens = (_strip_edges(w) for w in raw_sentence.split())
    return [t for t in tokens if t]


@lru_cache(maxsize=65536)
def porter_stem(token: str) -> str:
    """Porter (1980) stem of an ASCII alphabetic token; anything else passes through."""
    if not (token.isascii() and token.isalpha()):
        return token
    return _STEMMER.stem(token, to_lowercase=False)


def extract_ngrams(tokens: Sequence[str], n: int) -> NGramMultiset:
    """Count every contiguous window of ``n`` tokens.

    Grams are tuples of tokens, so unigrams are 1-tuples.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    tokens = tuple(tokens)
    return NGramMultiset(tokens[i:i + n] for i in range(len(tokens) - n + 1))


def ngrams_of_sentences(sentences: Iterable[Sequence[str]], n: int) -> NGramMultiset:
    """Multiset union of per-sentence grams; windows never cross sentences."""
    out = NGramMultiset()
    for toks in sentences:
        out.update(extract_ngrams(toks, n))
    return out


def preprocess_tokens(raw_sentence: str, config: PreprocessConfig) -> tuple[tuple, int]:
    """Return (retained tokens, raw word count) for one sentence."""
    words = tokenize(raw_sentence, lowercase=config.lowercase)
    raw_count = len(words)
    if config.stopword_removal and config.stopwords:
        words = [w for w in words if w.lower() not in config.stopwords]
    if config.stemming:
        words = [porter_stem(w) for w in words]
    return tuple(words), raw_count


def build_document_set(documents: Sequence[Sequence[str]], config: PreprocessConfig) -> DocumentSet:
    """Preprocess documents (lists of sentence strings) into one sentence pool.

    Sentences with no words at all are skipped; ids are assigned over the
    kept sentences in document order.
    """
    sentences = []
    for d, doc in enumerate(documents):
        for raw in doc:
            tokens, count = preprocess_tokens(raw, config)
            if count == 0:
                continue
            sentences.append(Sentence(len(sentences), tokens, count, raw, d))
    return DocumentSet(tuple(sentences))


def build_references(references: Sequence[Sequence[str]], config: PreprocessConfig) -> list[ReferenceSummary]:
    refs = []
    for k, ref in enumerate(references):
        sents = tuple(preprocess_tokens(raw, config)[0] for raw in ref)
        refs.append(ReferenceSummary(k, sents))
    return refs


def reference_multiset(ref: ReferenceSummary, n: int, mode: str = "sentence") -> NGramMultiset:
    if mode == "joined":
        return extract_ngrams([t for s in ref.sentences for t in s], n)
    return ngrams_of_sentences(ref.sentences, n)


def read_stopwords(path: str | Path) -> frozenset:
    """Read a stopword file: UTF-8, one word per line, ``#`` comments ignored."""
    text = Path(path).read_text(encoding="utf-8")
    return _parse_stopwords(text)


def _parse_stopwords(text: str) -> frozenset:
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset:
    text = resources.files("oracle_summ").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
    return _parse_stopwords(text)
