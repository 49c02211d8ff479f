"""Oracle summary search: greedy warm start, knapsack upper bound, and
branch-and-bound enumeration of every oracle, plus brute force for testing.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .rouge import ReferenceBank

log = logging.getLogger(__name__)

EXHAUSTIVE_CAP = 20


@dataclass
class SearchState:
    """A node of the search tree: the chosen path ``V`` and where it ends in ``order``."""

    V: list
    used_length: int
    numerator: int
    order: list
    frontier_index: int

    @classmethod
    def from_path(cls, bank: ReferenceBank, V: Sequence[int], order: Sequence[int] | None = None):
        """State for path ``V``; ``order`` defaults to :func:`search_order` over all sentences."""
        order = list(search_order(bank, range(len(bank))) if order is None else order)
        V = list(V)
        pos = max((order.index(v) for v in V), default=-1)
        return cls(V, int(bank.lengths[V].sum()) if V else 0, bank.numerator(V), order, pos)

    @property
    def remaining(self) -> list:
        """Sentences after the frontier: the candidates for extension (W)."""
        return self.order[self.frontier_index + 1:]


@dataclass
class OracleResult:
    numerator: int
    denominator: int
    oracles: list
    nodes_checked: int
    greedy_numerator: int = 0
    elapsed: float = 0.0
    stats: dict = field(default_factory=dict)

    @property
    def tau(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def tau_float(self) -> float:
        return float(self.tau)

    @property
    def greedy_score(self) -> Fraction:
        return Fraction(self.greedy_numerator, self.denominator)


def candidate_sentences(bank: ReferenceBank, lmax: int, drop_irrelevant: bool = True) -> list[int]:
    """Sentences that may appear in an oracle: they fit the budget and,
    unless disabled, share at least one gram with a reference."""
    return [i for i in range(len(bank))
            if bank.lengths[i] <= lmax and (bank.is_relevant(i) or not drop_irrelevant)]


def search_order(bank: ReferenceBank, ids: Iterable[int]) -> list[int]:
    """Descending singleton score, ties by ascending id."""
    return sorted(ids, key=lambda i: (-bank.numerator([i]), i))


def _gains(bank: ReferenceBank, cov: np.ndarray, ids: Sequence[int]) -> list[int]:
    residual = np.maximum(bank.caps - cov, 0)
    out = []
    for i in ids:
        cols, cnt = bank.row(i)
        out.append(int(np.minimum(residual[cols], cnt).sum()))
    return out


def greedy_initial(bank: ReferenceBank, lmax: int) -> tuple[frozenset, Fraction]:
    """Density greedy under the word budget, then compared with the best single sentence.

    At each step the remaining sentence with the largest gain per word is
    taken (ties to the lower id). It is added when it still fits and is
    discarded either way. Returns the better of the greedy set and the best
    fitting singleton; ``(frozenset(), 0)`` when nothing fits.
    """
    fits = [i for i in range(len(bank)) if bank.lengths[i] <= lmax]
    if not fits:
        return frozenset(), Fraction(0)
    lens = bank.lengths
    remaining = list(fits)
    chosen: list[int] = []
    cov = np.zeros(bank.n_columns, dtype=np.int64)
    used = 0
    while remaining:
        gains = _gains(bank, cov, remaining)
        best = 0
        for j in range(1, len(remaining)):
            # gain_j / len_j > gain_best / len_best, exact
            if gains[j] * lens[remaining[best]] > gains[best] * lens[remaining[j]]:
                best = j
        s = remaining.pop(best)
        if used + lens[s] <= lmax:
            chosen.append(s)
            used += int(lens[s])
            cols, cnt = bank.row(s)
            cov[cols] += cnt
    greedy_num = int(np.minimum(bank.caps, cov).sum())
    single = min(fits, key=lambda i: (-bank.numerator([i]), i))
    single_num = bank.numerator([single])
    if single_num > greedy_num:
        return frozenset([single]), bank.to_score(single_num, exact=True)
    return frozenset(chosen), bank.to_score(greedy_num, exact=True)


def knapsack_bound(bank: ReferenceBank, V: Sequence[int], W: Sequence[int], capacity: int,
                   exact: bool = False):
    """ROUGE of V plus the fractional-knapsack relaxation of the best extension from W.

    Item values are the marginal gains of each w on top of V and weights
    are word lengths; items go in by descending density, the last one
    fractionally.
    """
    V, W = list(V), list(W)
    cov = bank.coverage(V)
    total = Fraction(int(np.minimum(bank.caps, cov).sum()))
    gains = _gains(bank, cov, W)
    items = sorted(zip(gains, (int(bank.lengths[w]) for w in W)),
                   key=lambda gl: Fraction(gl[0], gl[1]), reverse=True)
    cap = capacity
    for g, ln in items:
        if cap <= 0 or g == 0:
            break
        if ln <= cap:
            total += g
            cap -= ln
        else:
            total += Fraction(g * cap, ln)
            break
    score = total / bank.denominator
    return score if exact else float(score)


def upper_bound(bank: ReferenceBank, state: SearchState, lmax: int, exact: bool = False):
    """Upper bound on any feasible extension of ``state`` by sentences after its frontier."""
    return knapsack_bound(bank, state.V, state.remaining, lmax - state.used_length, exact)


def _permuted_rows(bank: ReferenceBank, order: Sequence[int]):
    indptr = [0]
    idx, dat = [], []
    for i in order:
        cols, cnt = bank.row(i)
        idx.append(cols)
        dat.append(cnt)
        indptr.append(indptr[-1] + len(cols))
    cat = (lambda xs: np.concatenate(xs) if xs else np.zeros(0, dtype=np.int64))
    return np.asarray(indptr, dtype=np.int64), cat(idx), cat(dat)


def _sort_family(family: Iterable[frozenset]) -> list[frozenset]:
    return sorted(set(family), key=lambda s: (len(s), sorted(s)))


def minimal_oracles(bank: ReferenceBank, oracles: Sequence[frozenset], numerator: int) -> list[frozenset]:
    """Keep oracles from which no single sentence can be dropped without losing score.

    By monotonicity this is the same as inclusion-minimality within the family.
    """
    return [o for o in oracles if all(bank.numerator(o - {s}) < numerator for s in o)]


def enumerate_oracles(bank: ReferenceBank, lmax: int, *, prune: bool = True, minimal: bool = False,
                      drop_irrelevant: bool = True, first_only: bool = False,
                      backend: str | None = None) -> OracleResult:
    """All feasible sentence sets attaining the optimal ROUGE-N under budget ``lmax``.

    The incumbent starts at the greedy score. Sentences are visited in
    descending singleton score; a state at or above the incumbent updates it
    and is recorded, a state below it is expanded only while its knapsack
    bound still reaches the incumbent. Recorded states are filtered to the
    final optimum.

    With ``first_only`` the same search keeps only the first state that
    attains the optimum.
    """
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    t0 = time.perf_counter()
    _, greedy_score = greedy_initial(bank, lmax)
    greedy_num = int(greedy_score * bank.denominator)
    cands = candidate_sentences(bank, lmax, drop_irrelevant)
    order = search_order(bank, cands)
    indptr, indices, data = _permuted_rows(bank, order)
    lens = bank.lengths[order] if order else np.zeros(0, dtype=np.int64)
    mode = kernels.MODE_FIRST if first_only else kernels.MODE_ALL
    tau, masks, scores, nodes = kernels.run_search(lens, indptr, indices, data, bank.caps, lmax, greedy_num,
                                                   prune=prune, mode=mode, backend=backend)
    order_arr = np.asarray(order, dtype=np.int64)
    family = [frozenset(order_arr[mask].tolist()) for mask, s in zip(masks, scores) if s == tau]
    if not family:
        if tau != 0:
            raise RuntimeError(f"search ended at numerator {tau} without a recorded oracle")
        family = [frozenset()]
    family = _sort_family(family)
    if minimal:
        family = minimal_oracles(bank, family, tau)
    elapsed = time.perf_counter() - t0
    log.debug("enumerate: |D|=%d candidates=%d tau=%d/%d oracles=%d nodes=%d %.3fs",
              len(bank), len(order), tau, bank.denominator, len(family), nodes, elapsed)
    return OracleResult(tau, bank.denominator, family, nodes, greedy_num, elapsed,
                        {"candidates": len(order), "backend": backend or kernels.BACKEND, "pruned": prune})


def extract_one_oracle(bank: ReferenceBank, lmax: int, **kwargs) -> tuple[frozenset, Fraction]:
    res = enumerate_oracles(bank, lmax, first_only=True, **kwargs)
    return res.oracles[0], res.tau


def exhaustive_oracles(bank: ReferenceBank, lmax: int, *, cap: int = EXHAUSTIVE_CAP,
                       drop_irrelevant: bool = True, minimal: bool = False) -> OracleResult:
    """Brute force over every subset of candidate sentences.

    Same candidate rule and output conventions as :func:`enumerate_oracles`;
    scores come from a dense matrix product rather than incremental updates.
    """
    cands = candidate_sentences(bank, lmax, drop_irrelevant)
    m = len(cands)
    if m > cap:
        raise ValueError(f"exhaustive search refused: {m} candidate sentences exceeds cap {cap}")
    t0 = time.perf_counter()
    counts = bank.dense_counts()[cands]
    lens = bank.lengths[cands]
    best, family, feasible = 0, [], 0
    chunk = 1 << 14
    bits = np.arange(m, dtype=np.int64)
    for lo in range(1, 1 << m, chunk):
        codes = np.arange(lo, min(lo + chunk, 1 << m), dtype=np.int64)
        X = ((codes[:, None] >> bits) & 1).astype(np.int64)
        ok = X @ lens <= lmax
        X = X[ok]
        feasible += len(X)
        if not len(X):
            continue
        nums = np.minimum(X @ counts, bank.caps).sum(axis=1)
        top = int(nums.max())
        if top > best:
            best, family = top, []
        if top == best:
            family.extend(frozenset(np.asarray(cands)[row.astype(bool)].tolist()) for row in X[nums == best])
    if not family:
        family = [frozenset()]
    family = _sort_family(family)
    if minimal:
        family = minimal_oracles(bank, family, best)
    return OracleResult(best, bank.denominator, family, feasible, 0, time.perf_counter() - t0,
                        {"candidates": m})
