"""Evaluation of system summaries against an oracle family, plus correlations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


@dataclass
class EvalReport:
    precision: float
    recall: float
    f_measure: float
    per_oracle: list = field(default_factory=list)


def f_score(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _family(fam: Iterable[Iterable[int]]) -> list[frozenset]:
    fam = [frozenset(o) for o in fam]
    if not fam:
        raise ValueError("oracle family is empty")
    if any(not o for o in fam):
        raise ValueError("oracle family contains an empty summary")
    if len(set(fam)) != len(fam):
        raise ValueError("oracle family contains duplicates")
    return fam


def multi_oracle_prf(S: Iterable[int], fam: Iterable[Iterable[int]]) -> EvalReport:
    """Precision and recall of sentence set ``S`` averaged over all oracles.

    F is computed from the averaged P and R, not by averaging per-oracle F.
    """
    S = frozenset(S)
    if not S:
        raise ValueError("system summary is empty")
    fam = _family(fam)
    per = []
    for o in fam:
        hit = len(o & S)
        p, r = hit / len(S), hit / len(o)
        per.append((p, r, f_score(p, r)))
    P = sum(x[0] for x in per) / len(per)
    R = sum(x[1] for x in per) / len(per)
    return EvalReport(P, R, f_score(P, R), per)


def random_single_oracle(S: Iterable[int], fam: Iterable[Iterable[int]], *, draws: int = 100,
                         seed: int = 0, n_boot: int = 1000, level: float = 0.95) -> dict:
    """F-measure against one randomly drawn oracle, repeated ``draws`` times.

    Returns the mean of each of P, R, F with a percentile bootstrap interval
    for the mean.
    """
    S = frozenset(S)
    fam = _family(fam)
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(fam), size=draws)
    rows = np.array([multi_oracle_prf(S, [fam[i]]).per_oracle[0] for i in picks])
    boot_idx = rng.integers(0, draws, size=(n_boot, draws))
    alpha = (1 - level) / 2
    out = {}
    for c, name in enumerate(("precision", "recall", "f_measure")):
        means = rows[boot_idx, c].mean(axis=1)
        lo, hi = np.quantile(means, [alpha, 1 - alpha])
        out[name] = {"mean": float(rows[:, c].mean()), "ci_low": float(lo), "ci_high": float(hi)}
    out["draws"] = draws
    out["seed"] = seed
    return out


def jaccard(A: Iterable, B: Iterable) -> float:
    A, B = set(A), set(B)
    union = A | B
    if not union:
        raise ValueError("Jaccard index undefined for two empty sets")
    return len(A & B) / len(union)


def mean_pairwise_jaccard(fam: Sequence[Iterable]) -> float:
    """Average Jaccard index over all unordered pairs of a family (1.0 for a single set)."""
    fam = [set(o) for o in fam]
    if len(fam) < 2:
        return 1.0
    vals = [jaccard(fam[i], fam[j]) for i in range(len(fam)) for j in range(i + 1, len(fam))]
    return sum(vals) / len(vals)


def _check_pair(xs, ys):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("inputs must be 1-d sequences of equal length")
    if len(xs) < 2:
        raise ValueError("need at least two observations")
    return xs, ys


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    xs, ys = _check_pair(xs, ys)
    dx, dy = xs - xs.mean(), ys - ys.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValueError("correlation undefined for a constant input")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def rankdata(xs: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share their average rank."""
    xs = np.asarray(xs, dtype=np.float64)
    order = np.argsort(xs, kind="mergesort")
    ranks = np.empty(len(xs), dtype=np.float64)
    i = 0
    while i < len(xs):
        j = i
        while j + 1 < len(xs) and xs[order[j + 1]] == xs[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman's rho: Pearson on average ranks."""
    xs, ys = _check_pair(xs, ys)
    return pearson(rankdata(xs), rankdata(ys))
