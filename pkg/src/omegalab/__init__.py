"""Numerical laboratory for omega results on the divisor, circle and Piltz
error terms: exact error terms, truncated Voronoi series, Fejer smoothing,
simultaneous diophantine approximation, resonance sets and resonance hunts."""

from .arith import SieveTable, build_sieve, cached_sieve, main_term, summatory
from .errterm import CIRCLE, DIVISOR, ErrKind, error_profile, error_term, exact_error
from .hunter import HuntConfig, HuntRecord, baseline_random, hunt, lemma3_rhs, verify_lemma3

__version__ = "0.1.0"

__all__ = [
    "SieveTable", "build_sieve", "cached_sieve", "main_term", "summatory",
    "ErrKind", "DIVISOR", "CIRCLE", "error_term", "error_profile", "exact_error",
    "HuntConfig", "HuntRecord", "hunt", "lemma3_rhs", "verify_lemma3", "baseline_random",
]
