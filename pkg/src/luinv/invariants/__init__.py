"""Quasi-LU criteria: norm condition, trace identities, Albert polynomial, GHS."""

from .albert import MultiPoly, albert_check, albert_polynomial
from .ghs import ghs_block, ghs_check
from .traces import (
    PAIRS,
    DerivedTriple,
    WordComposition,
    completeness_bound,
    derived_triple,
    necklaces,
    norm_check,
    norm_condition,
    specht_check,
    specht_word_trace,
    trace_identity_check,
)
from .verdict import Outcome, Verdict

__all__ = [
    "PAIRS",
    "DerivedTriple",
    "MultiPoly",
    "Outcome",
    "Verdict",
    "WordComposition",
    "albert_check",
    "albert_polynomial",
    "completeness_bound",
    "derived_triple",
    "ghs_block",
    "ghs_check",
    "necklaces",
    "norm_check",
    "norm_condition",
    "specht_check",
    "specht_word_trace",
    "trace_identity_check",
]
