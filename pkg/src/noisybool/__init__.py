"""Exact analysis of Boolean functions of a binary-symmetric-channel input.

The central object is the gap curve ``F_f(alpha) = H(alpha) - H(f(X)|Y)``
whose maximum over ``alpha`` is conjectured to sit at ``alpha = 1/2``.
"""
from .boolfn import (
    BooleanFunction,
    Ordering,
    RatioSpectrum,
    WeightSpectrum,
    column_one_counts,
    complement,
    dictator,
    format_function,
    lex,
    lex_column_count,
    new,
    parse_function,
    ratio_spectrum,
    spectrum_cmp,
    weight_spectrum,
)
from .curve import (
    CurveTable,
    EntropyUnit,
    baseline_bounds,
    big_f,
    big_t,
    binary_entropy,
    cond_prob_zero,
    fd_derivative,
    mutual_information,
    sample_curve,
)
from .spectral import D2Report, adjacent_delta, d2_at_half, d2_from_spectrum, g_of
from .sequences import a_closed, a_rec, check_bounds

__version__ = "0.1.0"

__all__ = [
    "a_closed",
    "a_rec",
    "adjacent_delta",
    "baseline_bounds",
    "big_f",
    "big_t",
    "binary_entropy",
    "BooleanFunction",
    "check_bounds",
    "column_one_counts",
    "complement",
    "cond_prob_zero",
    "CurveTable",
    "d2_at_half",
    "d2_from_spectrum",
    "D2Report",
    "dictator",
    "EntropyUnit",
    "fd_derivative",
    "format_function",
    "g_of",
    "lex",
    "lex_column_count",
    "mutual_information",
    "new",
    "Ordering",
    "parse_function",
    "ratio_spectrum",
    "RatioSpectrum",
    "sample_curve",
    "spectrum_cmp",
    "weight_spectrum",
    "WeightSpectrum",
]
