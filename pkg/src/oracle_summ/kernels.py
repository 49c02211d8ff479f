"""Hot loops of the branch-and-bound search.

Two interchangeable backends:

* ``numba``: an iterative DFS compiled with ``@njit``.
* ``numpy``: a recursive DFS in plain Python whose bound evaluation is
  vectorized with numpy.

The backend is chosen at import time from ``ORACLE_SUMM_BACKEND``
(``numba`` or ``numpy``); numba is the default when importable. Both take
the problem already permuted into search order and return identical results.

Scores are integer numerators throughout. The fractional-knapsack bound is
compared against the incumbent by cross-multiplication, so no rounding ever
enters a pruning decision.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

BACKENDS = ("numba", "numpy")
_requested = os.environ.get("ORACLE_SUMM_BACKEND", "").strip().lower()
if _requested and _requested not in BACKENDS:
    raise ImportError(f"ORACLE_SUMM_BACKEND must be one of {BACKENDS}, got {_requested!r}")
if _requested == "numba" and numba is None:  # pragma: no cover
    raise ImportError("ORACLE_SUMM_BACKEND=numba but numba is not installed")
BACKEND = _requested or ("numba" if numba is not None else "numpy")

MODE_ALL = 0
MODE_FIRST = 1


def bound_reaches(base: int, gains, lens, capacity: int, tau: int) -> bool:
    """Does ``base`` + fractional-knapsack value of the items reach ``tau``?

    Items are taken whole by descending gain/length while they fit; the first
    one that does not fit contributes ``gain * remaining / length``.
    """
    total = base
    if total >= tau:
        return True
    if capacity <= 0 or len(gains) == 0:
        return False
    gains = np.asarray(gains, dtype=np.int64)
    lens = np.asarray(lens, dtype=np.int64)
    order = np.argsort(-(gains / lens), kind="stable")
    for j in order:
        g, ln = int(gains[j]), int(lens[j])
        if g == 0:
            break
        if ln <= capacity:
            total += g
            capacity -= ln
            if total >= tau:
                return True
        else:
            return total * ln + g * capacity >= tau * ln
    return False


def marginal_gains_np(cov, caps, row_of, indices, data, n_rows):
    """Numerator gain of adding each row alone to coverage ``cov``."""
    residual = np.maximum(caps - cov, 0)
    contrib = np.minimum(residual[indices], data)
    return np.bincount(row_of, weights=contrib, minlength=n_rows).astype(np.int64)


def _search_numpy(lens, indptr, indices, data, caps, lmax, tau0, prune, mode):
    m = len(lens)
    row_of = np.repeat(np.arange(m), np.diff(indptr))
    cov = np.zeros(len(caps), dtype=np.int64)
    st = {"tau": int(tau0), "num": 0, "used": 0, "nodes": 0}
    records: list[tuple[int, tuple]] = []
    path: list[int] = []

    def apply(p, sign):
        lo, hi = indptr[p], indptr[p + 1]
        cols, cnt = indices[lo:hi], data[lo:hi]
        before = np.minimum(cov[cols], caps[cols]).sum()
        cov[cols] += sign * cnt
        st["num"] += int(np.minimum(cov[cols], caps[cols]).sum() - before)
        st["used"] += sign * int(lens[p])

    def bound_ok(p):
        if p + 1 >= m:
            return st["num"] >= st["tau"]
        gains = marginal_gains_np(cov, caps, row_of, indices, data, m)[p + 1:]
        return bound_reaches(st["num"], gains, lens[p + 1:], lmax - st["used"], st["tau"])

    def find_oracle(start):
        # Q is the suffix of the search order after the last chosen sentence.
        for p in range(start, m):
            if st["used"] + lens[p] > lmax:
                continue
            path.append(p)
            apply(p, 1)
            st["nodes"] += 1
            num = st["num"]
            if num >= st["tau"]:
                if num > st["tau"] and mode == MODE_ALL:
                    records.clear()
                st["tau"] = num
                if mode == MODE_ALL or not records or num > records[0][0]:
                    if mode == MODE_FIRST:
                        records.clear()
                    records.append((num, tuple(path)))
                find_oracle(p + 1)
            elif not prune or bound_ok(p):
                find_oracle(p + 1)
            apply(p, -1)
            path.pop()

    find_oracle(0)
    masks = np.zeros((len(records), m), dtype=np.bool_)
    scores = np.zeros(len(records), dtype=np.int64)
    for r, (num, p) in enumerate(records):
        masks[r, list(p)] = True
        scores[r] = num
    return st["tau"], masks, scores, st["nodes"]


if numba is not None:

    @numba.njit(cache=True)
    def _bound_reaches_nb(base, cov, caps, indptr, indices, data, lens, start, capacity, tau):
        if base >= tau:
            return True
        m = len(lens)
        if capacity <= 0 or start >= m:
            return False
        k = m - start
        gains = np.zeros(k, dtype=np.int64)
        dens = np.zeros(k, dtype=np.float64)
        for j in range(k):
            p = start + j
            g = 0
            for q in range(indptr[p], indptr[p + 1]):
                c = indices[q]
                res = caps[c] - cov[c]
                if res > 0:
                    g += data[q] if data[q] < res else res
            gains[j] = g
            dens[j] = -g / lens[p]
        order = np.argsort(dens, kind="mergesort")
        total = base
        for jj in range(k):
            j = order[jj]
            g = gains[j]
            if g == 0:
                break
            ln = lens[start + j]
            if ln <= capacity:
                total += g
                capacity -= ln
                if total >= tau:
                    return True
            else:
                return total * ln + g * capacity >= tau * ln
        return False

    @numba.njit(cache=True)
    def _apply_nb(p, sign, cov, caps, indptr, indices, data):
        delta = 0
        for q in range(indptr[p], indptr[p + 1]):
            c = indices[q]
            before = cov[c] if cov[c] < caps[c] else caps[c]
            cov[c] += sign * data[q]
            after = cov[c] if cov[c] < caps[c] else caps[c]
            delta += after - before
        return delta

    @numba.njit(cache=True)
    def _search_nb(lens, indptr, indices, data, caps, lmax, tau0, prune, mode):
        m = len(lens)
        cov = np.zeros(len(caps), dtype=np.int64)
        path = np.zeros(m + 1, dtype=np.int64)
        nxt = np.zeros(m + 1, dtype=np.int64)
        in_path = np.zeros(m, dtype=np.bool_)
        cap_rec = 64
        masks = np.zeros((cap_rec, m), dtype=np.bool_)
        scores = np.zeros(cap_rec, dtype=np.int64)
        n_rec = 0
        tau = tau0
        num = 0
        used = 0
        nodes = 0
        depth = 0
        nxt[0] = 0
        while depth >= 0:
            p = nxt[depth]
            if p >= m:
                depth -= 1
                if depth >= 0:
                    q = path[depth]
                    num += _apply_nb(q, -1, cov, caps, indptr, indices, data)
                    used -= lens[q]
                    in_path[q] = False
                continue
            nxt[depth] = p + 1
            if used + lens[p] > lmax:
                continue
            num += _apply_nb(p, 1, cov, caps, indptr, indices, data)
            used += lens[p]
            in_path[p] = True
            nodes += 1
            descend = False
            if num >= tau:
                if num > tau and mode == 0:
                    n_rec = 0
                tau = num
                store = mode == 0 or n_rec == 0 or num > scores[0]
                if store:
                    if mode == 1:
                        n_rec = 0
                    if n_rec == cap_rec:
                        cap_rec *= 2
                        grown = np.zeros((cap_rec, m), dtype=np.bool_)
                        grown[:n_rec] = masks[:n_rec]
                        masks = grown
                        grown_s = np.zeros(cap_rec, dtype=np.int64)
                        grown_s[:n_rec] = scores[:n_rec]
                        scores = grown_s
                    masks[n_rec] = in_path
                    scores[n_rec] = num
                    n_rec += 1
                descend = True
            elif not prune:
                descend = True
            else:
                descend = _bound_reaches_nb(num, cov, caps, indptr, indices, data, lens,
                                            p + 1, lmax - used, tau)
            if descend and p + 1 < m:
                path[depth] = p
                depth += 1
                nxt[depth] = p + 1
            else:
                num += _apply_nb(p, -1, cov, caps, indptr, indices, data)
                used -= lens[p]
                in_path[p] = False
        return tau, masks[:n_rec].copy(), scores[:n_rec].copy(), nodes


def run_search(lens, indptr, indices, data, caps, lmax, tau0, prune=True, mode=MODE_ALL, backend=None):
    """Depth-first branch and bound over sentences in the given order.

    Args:
        lens, indptr, indices, data: sentence lengths and CSR count rows,
            already permuted into search order.
        caps: per-column reference capacities.
        lmax: word budget.
        tau0: starting incumbent numerator (the greedy warm start).
        prune: when false, the bound is never consulted.
        mode: ``MODE_ALL`` records every state reaching the incumbent;
            ``MODE_FIRST`` keeps only the first state reaching the best score.

    Returns:
        ``(tau, masks, scores, nodes_checked)`` where ``masks`` marks the
        recorded states over positions in search order.
    """
    backend = backend or BACKEND
    args = (np.ascontiguousarray(lens, dtype=np.int64), np.ascontiguousarray(indptr, dtype=np.int64),
            np.ascontiguousarray(indices, dtype=np.int64), np.ascontiguousarray(data, dtype=np.int64),
            np.ascontiguousarray(caps, dtype=np.int64))
    if backend == "numba":
        if numba is None:  # pragma: no cover
            raise RuntimeError("numba backend requested but numba is not installed")
        tau, masks, scores, nodes = _search_nb(*args, np.int64(lmax), np.int64(tau0), bool(prune), np.int64(mode))
    elif backend == "numpy":
        tau, masks, scores, nodes = _search_numpy(*args, int(lmax), int(tau0), bool(prune), int(mode))
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return int(tau), masks, scores, int(nodes)
