"""Closed-form ``F_f''(1/2)`` from the ratio spectrum, in nats.

    F''(1/2) = -4 + 4 (n M^2 - 4 sum_t (M - t) t r_t) / ((2^n - M) M)

The interaction sum ``sum_t (M - t) t r_t`` equals ``sum_k (M - c_k) c_k`` over
the column one-counts ``c_k``, so it can be read off the ratio or the weight
spectrum. Moving one coordinate from minority count ``j`` down to ``i < j``
raises the value by ``16 (j - i)(M - i - j) / ((2^n - M) M)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .boolfn import BooleanFunction, RatioSpectrum, column_one_counts, lex_column_count, ratio_spectrum
from .errors import (
    DegenerateSizeError,
    DomainViolationError,
    IndexOrderViolationError,
    LengthMismatchError,
    SpectrumSumMismatchError,
)
from .sequences import a_rec


@dataclass(frozen=True)
class D2Report:
    n: int
    M: int
    spectrum: RatioSpectrum
    value: float
    sum_term: int

    @property
    def exact(self) -> Fraction:
        """The same quantity as an exact rational."""
        return d2_exact(self.n, self.M, self.sum_term)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "ratio_spectrum": list(self.spectrum.r),
            "value": self.value,
            "exact": str(self.exact),
            "sum_term": self.sum_term,
            "unit": "nats",
        }


def _check_size(n: int, M: int) -> None:
    if not 1 <= M <= (1 << n) - 1:
        raise DegenerateSizeError(f"M={M} must satisfy 1 <= M <= 2^{n} - 1")


def interaction_sum(M: int, r: Sequence[int]) -> int:
    """``sum_t (M - t) t r_t``."""
    return sum((M - t) * t * rt for t, rt in enumerate(r))


def d2_value(n: int, M: int, sum_term: int) -> float:
    S = 1 << n
    return -4.0 + 4.0 * ((n * M * M - 4 * sum_term) / ((S - M) * M))


def d2_exact(n: int, M: int, sum_term: int) -> Fraction:
    S = 1 << n
    return -4 + Fraction(4 * (n * M * M - 4 * sum_term), (S - M) * M)


def d2_from_spectrum(n: int, M: int, r: RatioSpectrum | Sequence[int]) -> D2Report:
    _check_size(n, M)
    spectrum = r if isinstance(r, RatioSpectrum) else RatioSpectrum(tuple(r))
    if len(spectrum) != M // 2 + 1:
        raise LengthMismatchError(f"spectrum for M={M} needs {M // 2 + 1} entries, got {len(spectrum)}")
    if spectrum.n != n:
        raise SpectrumSumMismatchError(f"spectrum sums to {spectrum.n}, expected n={n}")
    s = interaction_sum(M, spectrum.r)
    return D2Report(n, M, spectrum, d2_value(n, M, s), s)


def d2_at_half(f: BooleanFunction) -> D2Report:
    """``F_f''(1/2)`` in nats via the ratio spectrum of ``f``."""
    _check_size(f.n, f.M)
    return d2_from_spectrum(f.n, f.M, ratio_spectrum(f))


def d2_from_columns(n: int, M: int, counts: Sequence[int]) -> float:
    """Same value from raw column one-counts (weight-spectrum form)."""
    _check_size(n, M)
    return d2_value(n, M, sum((M - c) * c for c in counts))


def adjacent_delta(n: int, M: int, i: int, j: int) -> float:
    """Gain in ``F''(1/2)`` from moving one unit of spectrum mass from ``j`` to ``i``."""
    _check_size(n, M)
    if not 0 <= i < j <= M // 2:
        raise IndexOrderViolationError(f"need 0 <= i < j <= {M // 2}, got i={i}, j={j}")
    S = 1 << n
    return 16.0 * (j - i) * (M - i - j) / ((S - M) * M)


def lex_sum_term(n: int, M: int) -> int:
    """Interaction sum of ``lex(n, M)`` from the floor-sum column counts."""
    total = 0
    for i in range(1, n + 1):
        c = lex_column_count(n, M, i)
        total += (M - c) * c
    return total


def sum_term_of(f: BooleanFunction) -> int:
    M = f.M
    return sum((M - c) * c for c in column_one_counts(f))


def g_of(n: float, M: int) -> float:
    """``F''(1/2)`` of the lex function as a function of a real dimension ``n``.

    The interaction sum is held at its stable value ``a(M - 1)``; this is the
    quantity ``W(M) / 4`` appearing in the derivative of ``g``.
    """
    if M < 1:
        raise DomainViolationError(f"M must be >= 1, got {M}")
    if n < math.ceil(math.log2(M)) or 2.0 ** n <= M:
        raise DomainViolationError(f"need n >= ceil(log2 M) and 2^n > M, got n={n}, M={M}")
    s = a_rec(M - 1)
    return -4.0 + 4.0 * (n * M * M - 4 * s) / ((2.0 ** n - M) * M)
