"""N-gram multisets and ROUGE-N with exact integer bookkeeping.

Every ROUGE quantity shares the constant denominator (total reference gram
count), so scores are handled as integer numerators internally and turned
into :class:`~fractions.Fraction` or ``float`` only at the surface.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class EmptyReferenceError(ValueError):
    """Raised when the references contain no n-gram at all."""


class NGramMultiset(Counter):
    """Counter of n-grams that never stores zero or negative counts."""

    def __setitem__(self, key, value):
        if value > 0:
            super().__setitem__(key, value)
        else:
            self.pop(key, None)

    def update(self, *args, **kwargs):
        super().update(*args, **kwargs)
        for k in [k for k, v in self.items() if v <= 0]:
            del self[k]

    def minus(self, other: Counter) -> "NGramMultiset":
        return multiset_minus(self, other)

    def support(self) -> set:
        """Underlying set of distinct grams."""
        return set(self)

    def size(self) -> int:
        return sum(self.values())


def multiset_minus(a: Counter, b: Counter) -> NGramMultiset:
    """Saturating difference: count of t is max(0, N(t, a) - N(t, b))."""
    return NGramMultiset({t: c - b.get(t, 0) for t, c in a.items() if c > b.get(t, 0)})


def multiset_union(parts: Iterable[Counter]) -> NGramMultiset:
    """Additive union (counts summed)."""
    out = NGramMultiset()
    for p in parts:
        out.update(p)
    return out


def clipped_overlap(r: int, v: int, w: int) -> int:
    """Clipped contribution of one gram split over disjoint sets V and W.

    ``r``, ``v`` and ``w`` are the gram's counts in the reference, in V and
    in W. Written as the two-stage clip; equals ``min(r, v + w)``.
    """
    return min(r, v) + min(max(r - v, 0), w)


def clipped_overlap_min(r: int, v: int, w: int) -> int:
    return min(r, v + w)


class ReferenceBank:
    """References for one task, prepared against a fixed sentence pool.

    Each (reference k, gram g in k) pair becomes a *column* with capacity
    N(g, R_k). Sentences are stored as sparse rows over columns (CSR), with
    only grams that occur in some reference kept; that is all the clipped
    counts ever need.

    Attributes:
        refs: one multiset per reference.
        denominator: total gram count over all references.
        columns: list of (k, gram), ordered by k then gram.
        caps: int64 array, capacity per column.
        lengths: int64 array, word length per sentence.
        indptr, indices, data: CSR rows of per-sentence clip-relevant counts.
    """

    def __init__(self, sentence_grams: Sequence[Counter], refs: Sequence[Counter],
                 lengths: Sequence[int], n: int = 1):
        self.n = n
        self.refs = [NGramMultiset(r) for r in refs]
        self.sentence_grams = [NGramMultiset(g) for g in sentence_grams]
        if len(lengths) != len(self.sentence_grams):
            raise ValueError("one length per sentence is required")
        self.lengths = np.asarray(lengths, dtype=np.int64).reshape(-1)
        if np.any(self.lengths < 1):
            raise ValueError("sentence lengths must be >= 1")
        self.denominator = sum(r.size() for r in self.refs)
        if self.denominator <= 0:
            raise EmptyReferenceError("references contain no n-grams; ROUGE is undefined")

        self.columns = []
        col_of: dict = {}
        caps = []
        for k, r in enumerate(self.refs):
            for g in sorted(r):
                col_of.setdefault(g, []).append(len(self.columns))
                self.columns.append((k, g))
                caps.append(r[g])
        self.caps = np.asarray(caps, dtype=np.int64)

        indptr = [0]
        indices: list[int] = []
        data: list[int] = []
        for grams in self.sentence_grams:
            row = sorted((col, c) for g, c in grams.items() for col in col_of.get(g, ()))
            indices.extend(col for col, _ in row)
            data.extend(c for _, c in row)
            indptr.append(len(indices))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.data = np.asarray(data, dtype=np.int64)
        self._col_of = col_of

    @classmethod
    def from_tokens(cls, sentences: Sequence[Sequence[str]], references: Sequence[Sequence[Sequence[str]]],
                    n: int = 1, lengths: Sequence[int] | None = None, joined_references: bool = False):
        """Build from token lists: one list per source sentence, and per
        reference a list of sentences. Lengths default to token counts."""
        from .textprep import extract_ngrams, ngrams_of_sentences

        grams = [extract_ngrams(s, n) for s in sentences]
        if joined_references:
            refs = [extract_ngrams([t for s in ref for t in s], n) for ref in references]
        else:
            refs = [ngrams_of_sentences(ref, n) for ref in references]
        if lengths is None:
            lengths = [max(len(s), 1) for s in sentences]
        return cls(grams, refs, lengths, n)

    @classmethod
    def from_documents(cls, docset, references, config):
        """Build from a preprocessed :class:`DocumentSet` and reference list."""
        from .textprep import extract_ngrams, reference_multiset

        grams = [extract_ngrams(s.tokens, config.n) for s in docset]
        refs = [reference_multiset(r, config.n, config.reference_ngrams) for r in references]
        return cls(grams, refs, docset.lengths(config.length), config.n)

    def __len__(self):
        return len(self.sentence_grams)

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def is_relevant(self, i: int) -> bool:
        """True when sentence ``i`` shares at least one gram with some reference."""
        return self.indptr[i + 1] > self.indptr[i]

    def coverage(self, ids: Iterable[int]) -> np.ndarray:
        """Per-column gram counts of the union of sentences ``ids``."""
        cov = np.zeros(self.n_columns, dtype=np.int64)
        for i in ids:
            cols, cnt = self.row(i)
            cov[cols] += cnt
        return cov

    def numerator(self, ids: Iterable[int]) -> int:
        """Clipped-count numerator of ROUGE-N for a sentence set."""
        ids = self._checked(ids)
        return int(np.minimum(self.caps, self.coverage(ids)).sum())

    def dense_counts(self) -> np.ndarray:
        """(|D|, n_columns) matrix of clip-relevant counts."""
        out = np.zeros((len(self), self.n_columns), dtype=np.int64)
        for i in range(len(self)):
            cols, cnt = self.row(i)
            out[i, cols] = cnt
        return out

    def summary_multiset(self, ids: Iterable[int]) -> NGramMultiset:
        return multiset_union(self.sentence_grams[i] for i in self._checked(ids))

    def clipped_overlap(self, gram, k: int, V: Iterable[int], W: Iterable[int]) -> int:
        """Clipped count of ``gram`` against reference ``k`` for the disjoint union V + W."""
        V, W = _disjoint(self._checked(V), self._checked(W))
        r = self.refs[k][gram]
        v = sum(self.sentence_grams[i][gram] for i in V)
        w = sum(self.sentence_grams[i][gram] for i in W)
        return clipped_overlap(r, v, w)

    def to_score(self, numerator: int, exact: bool = False):
        frac = Fraction(int(numerator), self.denominator)
        return frac if exact else float(frac)

    def _checked(self, ids: Iterable[int]) -> list[int]:
        ids = list(ids)
        for i in ids:
            if not 0 <= i < len(self):
                raise IndexError(f"sentence id {i} out of range for {len(self)} sentences")
        return ids


def _disjoint(V, W):
    if set(V) & set(W):
        raise ValueError("V and W must be disjoint")
    return V, W


def rouge_n(bank: ReferenceBank, S: Iterable[int], exact: bool = False):
    """ROUGE-N of the summary made of sentence ids ``S``.

    Computed straight from the multisets, independently of the column
    layout used by the search. Returns a float, or a ``Fraction`` when
    ``exact`` is set.
    """
    summary = bank.summary_multiset(S)
    num = sum(min(c, summary[g]) for r in bank.refs for g, c in r.items())
    return bank.to_score(num, exact)


def rouge_prime(bank: ReferenceBank, V: Iterable[int], W: Iterable[int], exact: bool = False):
    """Marginal ROUGE-N of W on top of V, against the residual references R_k minus V."""
    V, W = _disjoint(bank._checked(V), bank._checked(W))
    v_grams = bank.summary_multiset(V)
    w_grams = bank.summary_multiset(W)
    num = 0
    for r in bank.refs:
        residual = multiset_minus(r, v_grams)
        num += sum(min(residual[g], w_grams[g]) for g in r)
    return bank.to_score(num, exact)
