"""Brute-force checks of the combinatorial identities behind the ``F''(1/2)`` formula.

Each check evaluates the left side by direct summation and the right side from
its closed form; both are exact integers except for the posterior sums, which
are floating point and compared against a tolerance.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .boolfn import BooleanFunction, weight_spectrum
from .curve import distance_histogram, _as_alphas
from .errors import ParameterTooLargeError, ProbabilityOutOfRangeError

LEMMA5_MAX_N = 30
LEMMA6_MAX_TOTAL = 40
LEMMA7_MAX_TOTAL = 30
LEMMA4_TOLERANCE = {0: 1e-9, 1: 1e-8, 2: 1e-8}


@dataclass
class IdentityCheck:
    lemma: str
    params: dict[str, Any]
    lhs: int | float
    rhs: int | float
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        if self.tolerance == 0.0:
            return self.lhs == self.rhs
        return abs(self.lhs - self.rhs) <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@functools.lru_cache(maxsize=None)
def _binom(a: int, b: int) -> int:
    return math.comb(a, b) if 0 <= b <= a else 0


def _int(x: Fraction) -> int | Fraction:
    return x.numerator if x.denominator == 1 else x


def _pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def lemma5(n: int) -> list[IdentityCheck]:
    """Moments of the binomial row: ``sum C(n,k) k^p`` for ``p = 0, 1, 2``."""
    if not 1 <= n <= LEMMA5_MAX_N:
        raise ParameterTooLargeError(f"n={n} outside [1, {LEMMA5_MAX_N}]")
    params = {"n": n}
    sums = [sum(_binom(n, k) * k**p for k in range(n + 1)) for p in range(3)]
    closed = [_pow2(n), n * _pow2(n - 1), n * (n + 1) * _pow2(n - 2)]
    names = ("lemma5.k0", "lemma5.k1", "lemma5.k2")
    return [IdentityCheck(name, params, s, _int(c)) for name, s, c in zip(names, sums, closed)]


def lemma6(m: int, n: int) -> list[IdentityCheck]:
    """``sum_r sum_k C(m,k) C(n,r-k) k^p`` for ``p = 1, 2``."""
    if m < 0 or n < 0 or not 1 <= m + n <= LEMMA6_MAX_TOTAL:
        raise ParameterTooLargeError(f"(m, n)=({m}, {n}) needs 1 <= m+n <= {LEMMA6_MAX_TOTAL}")
    params = {"m": m, "n": n}
    s1 = s2 = 0
    for r in range(m + n + 1):
        for k in range(r + 1):
            w = _binom(m, k) * _binom(n, r - k)
            s1 += w * k
            s2 += w * k * k
    return [
        IdentityCheck("lemma6.k1", params, s1, _int(m * _pow2(m + n - 1))),
        IdentityCheck("lemma6.k2", params, s2, _int(m * (m + 1) * _pow2(m + n - 2))),
    ]


def lemma7(m: int, n: int, t: int) -> IdentityCheck:
    """``sum_r sum_k sum_l C(m, r-k-l) C(n,k) C(t,l) k l = n t 2^{m+n+t-2}``."""
    if m < 0 or n < 1 or t < 1 or m + n + t > LEMMA7_MAX_TOTAL:
        raise ParameterTooLargeError(f"(m, n, t)=({m}, {n}, {t}) outside the supported range")
    total = 0
    for r in range(m + n + t + 1):
        for k in range(min(r, n) + 1):
            # terms with r-k-l > m vanish
            for l in range(max(0, r - k - m), min(r - k, t) + 1):
                total += _binom(m, r - k - l) * _binom(n, k) * _binom(t, l) * k * l
    return IdentityCheck("lemma7", {"m": m, "n": n, "t": t}, total, _int(n * t * _pow2(m + n + t - 2)))


def lemma5_sweep() -> list[IdentityCheck]:
    return [c for n in range(1, LEMMA5_MAX_N + 1) for c in lemma5(n)]


def lemma6_sweep() -> list[IdentityCheck]:
    return [
        c
        for m in range(1, LEMMA6_MAX_TOTAL)
        for n in range(1, LEMMA6_MAX_TOTAL - m + 1)
        for c in lemma6(m, n)
    ]


def lemma7_sweep() -> list[IdentityCheck]:
    return [
        lemma7(m, n, t)
        for m in range(0, LEMMA7_MAX_TOTAL - 1)
        for n in range(1, LEMMA7_MAX_TOTAL - m)
        for t in range(1, LEMMA7_MAX_TOTAL - m - n + 1)
    ]


def prob_derivative_table(f: BooleanFunction, alpha: float, order: int) -> np.ndarray:
    """Analytic ``d^order/dalpha^order Pr{f(X)=0 | y}`` for every ``y``.

    Uses the per-codeword term derivatives
    ``(d - n a) a^(d-1) (1-a)^(n-1-d)`` and
    ``(d(d-1) + 2(1-n) d a + (n^2-n) a^2) a^(d-2) (1-a)^(n-2-d)``.
    """
    (a,) = _as_alphas(alpha)
    if not 0.0 < a < 1.0:
        raise ProbabilityOutOfRangeError(f"alpha must lie in (0, 1), got {alpha}")
    n = f.n
    d = np.arange(n + 1, dtype=float)
    b = 1.0 - a
    if order == 0:
        coeff = a**d * b ** (n - d)
    elif order == 1:
        coeff = (d - n * a) * a ** (d - 1) * b ** (n - 1 - d)
    elif order == 2:
        coeff = (d * (d - 1) + 2 * (1 - n) * d * a + (n * n - n) * a * a) * a ** (d - 2) * b ** (n - 2 - d)
    else:
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    hist = distance_histogram(f)
    out = np.zeros(f.size)
    for k in range(n + 1):
        out += hist[:, k] * coeff[k]
    return out


def lemma4_check(f: BooleanFunction, alpha: float, max_order: int = 2) -> list[IdentityCheck]:
    """Posterior sums over ``y``: ``M`` at order 0, zero for derivatives."""
    if max_order not in (0, 1, 2):
        raise ValueError(f"max_order must be 0, 1 or 2, got {max_order}")
    checks = []
    for order in range(max_order + 1):
        total = 0.0
        for v in prob_derivative_table(f, alpha, order):
            total += float(v)
        expected = float(f.M) if order == 0 else 0.0
        checks.append(
            IdentityCheck(
                f"lemma4.order{order}",
                {"n": f.n, "zeros": list(f.zeros), "alpha": float(alpha)},
                total,
                expected,
                LEMMA4_TOLERANCE[order],
            )
        )
    return checks


def distance_square_sum(f: BooleanFunction) -> IdentityCheck:
    """``sum_y (sum_x d(x,y))^2 = n(n+1) M^2 S / 4 - S sum_t (M-t) t C_t``.

    The right side is the weight-spectrum reduction used to obtain the closed
    form for ``F''(1/2)``; the left side enumerates all pairs.
    """
    n, M, S = f.n, f.M, f.size
    hist = distance_histogram(f)
    per_y = hist @ np.arange(n + 1)
    lhs = int(sum(int(v) * int(v) for v in per_y))
    c = weight_spectrum(f).c if M else (n,)
    rhs = Fraction(n * (n + 1) * M * M * S, 4) - S * sum((M - t) * t * ct for t, ct in enumerate(c))
    return IdentityCheck("distance_square_sum", {"n": n, "zeros": list(f.zeros)}, lhs, _int(rhs))


@dataclass
class IdentitySummary:
    checks: int = 0
    failures: list[IdentityCheck] = field(default_factory=list)

    def add(self, items) -> None:
        for c in items:
            self.checks += 1
            if not c.passed:
                self.failures.append(c)

    @property
    def passed(self) -> bool:
        return not self.failures
