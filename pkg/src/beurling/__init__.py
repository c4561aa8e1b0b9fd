"""Exact word-length metrics, weighted convolution algebras on Z and on
direct sums of Z, and machine-checked inequality certificates.

Library layers: :mod:`~beurling.wordlen` (metric solvers and oracles),
:mod:`~beurling.weights` / :mod:`~beurling.l1z` (weights, norms, ratios),
:mod:`~beurling.meanslab` (Cesaro divergence witness),
:mod:`~beurling.dsum` (direct-sum algebra and ladder surrogates),
:mod:`~beurling.witness5` (lemma verifiers), all exposed through
:mod:`~beurling.api` (FastAPI) and :mod:`~beurling.cli` (batch client).
"""

from .exactnum import CertifiedInterval, ExpRatio, ExpSum
from .wordlen import (BudgetExceededError, GeneratorSchedule,
                      WordLengthResult, brute_force_oracle, generators_upto,
                      word_length_exact, word_length_upper, word_lengths_upto)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CertifiedInterval",
    "ExpRatio",
    "ExpSum",
    "GeneratorSchedule",
    "WordLengthResult",
    "brute_force_oracle",
    "generators_upto",
    "word_length_exact",
    "word_length_upper",
    "word_lengths_upto",
    "__version__",
]
