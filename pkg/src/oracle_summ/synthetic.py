"""Random small instances for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .rouge import ReferenceBank


def random_instance(rng: np.random.Generator, *, max_sentences: int = 15, max_len: int = 12,
                    vocab: int = 20, n: int | None = None, max_lmax: int = 30, max_refs: int = 3,
                    min_sentences: int = 1):
    """Draw a random task as token lists.

    Returns a dict with ``sentences`` (list of token lists), ``references``
    (list of references, each a list of token lists), ``n`` and ``lmax``.
    Tokens are drawn from a Zipf-like distribution so that overlaps and
    repeated grams are common.
    """
    words = [f"w{i}" for i in range(vocab)]
    p = 1.0 / np.arange(1, vocab + 1)
    p /= p.sum()

    def sentence(shortest=1):
        k = int(rng.integers(shortest, max_len + 1))
        return [words[j] for j in rng.choice(vocab, size=k, p=p)]

    m = int(rng.integers(min_sentences, max_sentences + 1))
    sentences = [sentence() for _ in range(m)]
    # Occasional verbatim duplicates create tied oracles.
    for i in range(m):
        if i and rng.random() < 0.15:
            sentences[i] = list(sentences[int(rng.integers(0, i))])
    # Two-word minimum keeps bigram references non-empty.
    references = [[sentence(2) for _ in range(int(rng.integers(1, 4)))]
                  for _ in range(int(rng.integers(1, max_refs + 1)))]
    return {
        "sentences": sentences,
        "references": references,
        "n": int(rng.choice([1, 2])) if n is None else n,
        "lmax": int(rng.integers(1, max_lmax + 1)),
    }


def instance_bank(inst: dict) -> ReferenceBank:
    return ReferenceBank.from_tokens(inst["sentences"], inst["references"], inst["n"])


def instance_task(inst: dict, name: str = "synthetic") -> dict:
    """Task-file object for an instance; stemming and stopwords off so the
    tokens survive preprocessing unchanged."""
    return {
        "schema_version": 1,
        "name": name,
        "n": inst["n"],
        "lmax": inst["lmax"],
        "documents": [[" ".join(s) for s in inst["sentences"]]],
        "references": [[" ".join(s) for s in ref] for ref in inst["references"]],
        "preprocessing": {"stemming": False, "stopword_removal": False},
    }
