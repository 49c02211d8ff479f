"""0-1 ILP whose optimum is the oracle's ROUGE-N numerator, and its LP-file export.

Variables: binary ``x_i`` per sentence, integer ``z_k_j`` per reference k
and distinct gram j of that reference (j indexes the reference's grams in
lexicographic order). Maximize the sum of z subject to the word budget,
``sum_i N(g_j, s_i) x_i >= z_k_j`` and ``z_k_j <= N(g_j, R_k)``.
No solver is bundled; the model is written out in CPLEX LP format.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .rouge import EmptyReferenceError, ReferenceBank

_TERMS_PER_LINE = 8


@dataclass(frozen=True)
class ZVar:
    k: int
    j: int
    gram: tuple
    demand: int
    supply: tuple  # ((sentence id, count), ...), ascending id

    @property
    def name(self) -> str:
        return f"z_{self.k}_{self.j}"


@dataclass(frozen=True)
class IlpModel:
    lengths: tuple
    lmax: int
    z: tuple

    @property
    def n_sentences(self) -> int:
        return len(self.lengths)

    @property
    def objective_scale(self) -> int:
        """Sum of demands, i.e. the ROUGE denominator."""
        return sum(v.demand for v in self.z)

    def supply_matrix(self) -> np.ndarray:
        """(n_z, n_sentences) coefficients of the supply rows."""
        A = np.zeros((len(self.z), self.n_sentences), dtype=np.int64)
        for r, v in enumerate(self.z):
            for i, c in v.supply:
                A[r, i] = c
        return A

    def demands(self) -> np.ndarray:
        return np.array([v.demand for v in self.z], dtype=np.int64)


def build_ilp(bank: ReferenceBank, lmax: int) -> IlpModel:
    """ILP for the task held by ``bank`` under word budget ``lmax``."""
    if bank.denominator <= 0:  # pragma: no cover - the bank refuses to exist
        raise EmptyReferenceError("references contain no n-grams")
    zs = []
    for k, ref in enumerate(bank.refs):
        for j, g in enumerate(sorted(ref)):
            supply = tuple((i, sg[g]) for i, sg in enumerate(bank.sentence_grams) if sg[g] > 0)
            zs.append(ZVar(k, j, g, ref[g], supply))
    return IlpModel(tuple(int(x) for x in bank.lengths), int(lmax), tuple(zs))


def objective_to_rouge(bank: ReferenceBank, objective_value: int, exact: bool = False):
    if objective_value < 0:
        raise ValueError("objective value must be >= 0")
    return bank.to_score(objective_value, exact)


def _check_length(model: IlpModel, chosen: Sequence[int]) -> None:
    total = sum(model.lengths[i] for i in chosen)
    if total > model.lmax:
        raise ValueError(f"assignment uses {total} words, budget is {model.lmax}")


def optimal_z(model: IlpModel, chosen: Iterable[int]) -> list[int]:
    """Best completion of z for fixed x: each z at min(demand, supply)."""
    chosen = set(chosen)
    return [min(v.demand, sum(c for i, c in v.supply if i in chosen)) for v in model.z]


def evaluate_assignment(model: IlpModel, chosen: Iterable[int]) -> int:
    """Objective of the best feasible completion for sentences ``chosen``."""
    chosen = sorted(set(chosen))
    _check_length(model, chosen)
    return sum(optimal_z(model, chosen))


def evaluate_assignments(model: IlpModel, X: np.ndarray) -> np.ndarray:
    """Vectorized :func:`evaluate_assignment` over rows of a 0/1 matrix.

    Rows violating the budget get -1.
    """
    X = np.asarray(X, dtype=np.int64)
    supply = X @ model.supply_matrix().T
    out = np.minimum(supply, model.demands()).sum(axis=1)
    out[X @ np.asarray(model.lengths, dtype=np.int64) > model.lmax] = -1
    return out


def violated_constraints(model: IlpModel, x: Sequence[int], z: Sequence[int]) -> list[str]:
    """Names of constraints that ``(x, z)`` violates; empty when feasible."""
    bad = []
    if any(v not in (0, 1) for v in x):
        bad.append("binaries")
    if sum(ln * xi for ln, xi in zip(model.lengths, x)) > model.lmax:
        bad.append("len")
    for v, zv in zip(model.z, z):
        if zv < 0 or int(zv) != zv:
            bad.append(f"int_{v.k}_{v.j}")
        if sum(c * x[i] for i, c in v.supply) < zv:
            bad.append(f"sup_{v.k}_{v.j}")
        if zv > v.demand:
            bad.append(f"dem_{v.k}_{v.j}")
    return bad


def _wrap(terms: list[str]) -> str:
    lines = [" ".join(terms[i:i + _TERMS_PER_LINE]) for i in range(0, len(terms), _TERMS_PER_LINE)]
    return "\n   ".join(lines)


def _linear(pairs: Iterable[tuple[int, str]]) -> list[str]:
    terms = []
    for coef, var in pairs:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        terms.append(f"- {body}" if sign == "-" else (body if not terms else f"+ {body}"))
    return terms


def format_lp(model: IlpModel) -> str:
    out = io.StringIO()
    out.write("Maximize\n")
    out.write(" obj: " + _wrap(_linear((1, v.name) for v in model.z)) + "\n")
    out.write("Subject To\n")
    if model.n_sentences:
        terms = _linear((ln, f"x_{i}") for i, ln in enumerate(model.lengths))
        out.write(f" len: {_wrap(terms)} <= {model.lmax}\n")
    for v in model.z:
        terms = _linear([(c, f"x_{i}") for i, c in v.supply] + [(-1, v.name)])
        out.write(f" sup_{v.k}_{v.j}: {_wrap(terms)} >= 0\n")
    for v in model.z:
        out.write(f" dem_{v.k}_{v.j}: {v.name} <= {v.demand}\n")
    out.write("Bounds\n")
    for v in model.z:
        out.write(f" 0 <= {v.name} <= {v.demand}\n")
    out.write("Generals\n")
    out.write(" " + _wrap([v.name for v in model.z]) + "\n")
    if model.n_sentences:
        out.write("Binaries\n")
        out.write(" " + _wrap([f"x_{i}" for i in range(model.n_sentences)]) + "\n")
    out.write("End\n")
    return out.getvalue()


def write_lp_file(model: IlpModel, destination: str | Path | TextIO) -> None:
    """Write CPLEX LP text (ASCII, LF newlines) to a path or text stream."""
    text = format_lp(model)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def gram_index(model: IlpModel) -> list[dict]:
    """Mapping from z variable names back to (reference, gram, demand)."""
    return [{"var": v.name, "reference": v.k, "gram": list(v.gram), "demand": v.demand} for v in model.z]
