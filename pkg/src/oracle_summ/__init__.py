"""Exact extractive oracle summaries under ROUGE-N.

Finds and enumerates the sentence subsets that maximize ROUGE-N against a
set of references under a word budget, exports the equivalent 0-1 ILP,
counts feasible summaries, and scores system summaries against the oracles.
"""

__version__ = "0.1.0"

from .counting import count_feasible, count_table
from .ilp import IlpModel, build_ilp, evaluate_assignment, objective_to_rouge, write_lp_file
from .kernels import BACKEND
from .metrics import EvalReport, jaccard, multi_oracle_prf, pearson, spearman
from .rouge import (EmptyReferenceError, NGramMultiset, ReferenceBank, clipped_overlap, multiset_minus,
                    rouge_n, rouge_prime)
from .search import (OracleResult, SearchState, enumerate_oracles, exhaustive_oracles, extract_one_oracle,
                     greedy_initial, upper_bound)
from .textprep import PreprocessConfig, extract_ngrams, porter_stem, tokenize

__all__ = [
    "BACKEND", "EmptyReferenceError", "EvalReport", "IlpModel", "NGramMultiset", "OracleResult",
    "PreprocessConfig", "ReferenceBank", "SearchState", "build_ilp", "clipped_overlap", "count_feasible",
    "count_table", "enumerate_oracles", "evaluate_assignment", "exhaustive_oracles", "extract_ngrams",
    "extract_one_oracle", "greedy_initial", "jaccard", "multi_oracle_prf", "multiset_minus",
    "objective_to_rouge", "pearson", "porter_stem", "rouge_n", "rouge_prime", "spearman", "tokenize",
    "upper_bound", "write_lp_file",
]
