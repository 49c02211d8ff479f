"""Number of length-feasible summaries via the subset-sum recurrence.

Counts reach 10**36 on real inputs, so the table holds Python ints.
"""

from __future__ import annotations

from typing import Sequence


def _kept_lengths(lengths: Sequence[int], filter: bool, bank) -> list[int]:
    if any(int(x) < 1 for x in lengths):
        raise ValueError("sentence lengths must be >= 1")
    if not filter:
        return [int(x) for x in lengths]
    if bank is None:
        raise ValueError("filter=True requires a reference bank")
    if len(bank) != len(lengths):
        raise ValueError("lengths and bank disagree on the number of sentences")
    return [int(x) for i, x in enumerate(lengths) if bank.is_relevant(i)]


def count_table(lengths: Sequence[int], lmax: int, *, filter: bool = False, bank=None) -> list[list[int]]:
    """Full table: ``C[i][j]`` = number of subsets of the first i sentences
    with total length exactly j (j = 0..lmax)."""
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    lens = _kept_lengths(lengths, filter, bank)
    table = [[1] + [0] * lmax]
    for ln in lens:
        prev = table[-1]
        table.append([prev[j] + prev[j - ln] if j - ln >= 0 else prev[j] for j in range(lmax + 1)])
    return table


def count_feasible(lengths: Sequence[int], lmax: int, *, filter: bool = False, bank=None) -> int:
    """Number of non-empty sentence subsets with total length in [1, lmax].

    With ``filter`` set, sentences sharing no gram with any reference in
    ``bank`` are dropped first.
    """
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    row = [1] + [0] * lmax
    for ln in _kept_lengths(lengths, filter, bank):
        # descending j so each sentence is used at most once
        for j in range(lmax, ln - 1, -1):
            row[j] += row[j - ln]
    return sum(row[1:])
