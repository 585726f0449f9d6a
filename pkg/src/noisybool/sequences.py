"""The integer sequence ``a(m)``: recursion, floor-sum closed form, and bounds.

``a(m)`` equals the lex interaction sum ``sum_t (M - t) t r_t`` at ``M = m + 1``.
It satisfies

    a(0) = 0,  a(2m) = 2a(m) + 2a(m-1) + m(m+1),  a(2m+1) = 4a(m) + (m+1)^2

and the two-sided bound

    (m+1)^2 log2(m+1) / 4  <=  a(m)  <  (m+1)^2 (log2(m+1) + b) / 4,

with ``b = (2 ln 2 - 1) / (2 ln 2)`` and equality on the left iff ``m + 1`` is a
power of two. For ``m >= 6`` the sharper upper bound replaces ``b`` by
``(m - 1) b / m``.
"""
from __future__ import annotations

import decimal
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainViolationError, ParameterTooLargeError

B = (2.0 * math.log(2.0) - 1.0) / (2.0 * math.log(2.0))
MAX_INDEX = 1 << 40
GUARD = 1e-9
DIGITS = 60


@functools.lru_cache(maxsize=None)
def _a(m: int) -> int:
    if m == 0:
        return 0
    k = m // 2
    if m % 2 == 0:
        return 2 * _a(k) + 2 * _a(k - 1) + k * (k + 1)
    return 4 * _a(k) + (k + 1) ** 2


def a_rec(m: int) -> int:
    """``a(m)`` from the recursion (memoized; depth is ``O(log m)``)."""
    if m < 0:
        raise DomainViolationError(f"a(m) is defined for m >= 0, got {m}")
    if m > MAX_INDEX:
        raise ParameterTooLargeError(f"m={m} exceeds 2^40")
    return _a(int(m))


def a_table(m_max: int) -> list[int]:
    """``[a(0), ..., a(m_max)]`` computed bottom-up."""
    if m_max < 0:
        raise DomainViolationError(f"m_max must be >= 0, got {m_max}")
    a = [0] * (m_max + 1)
    for m in range(1, m_max + 1):
        k = m // 2
        if m % 2 == 0:
            a[m] = 2 * a[k] + 2 * a[k - 1] + k * (k + 1)
        else:
            a[m] = 4 * a[k] + (k + 1) ** 2
    return a


def a_closed(M: int) -> int:
    """Floor-sum form, equal to ``a(M - 1)``.

    ``sum_{i=1}^{ceil(log2 M)} (M - 2^{i-1} q_i) 2^{i-1} q_i`` with
    ``q_i = floor(1/2 + M / 2^i)``.
    """
    if M < 1:
        raise DomainViolationError(f"M must be >= 1, got {M}")
    total = 0
    for i in range(1, (M - 1).bit_length() + 1):
        half = 1 << (i - 1)
        block = half * ((M + half) >> i)
        total += (M - block) * block
    return total


def _power_of_two_exponent(x: int) -> int | None:
    return x.bit_length() - 1 if x > 0 and x & (x - 1) == 0 else None


def exact_lower(m: int) -> int | None:
    """Lower bound as an exact integer when ``m + 1 = 2^k``, else ``None``."""
    k = _power_of_two_exponent(m + 1)
    if k is None:
        return None
    return (k << (2 * k)) >> 2


def _decimal_bounds(m: int) -> tuple[decimal.Decimal, decimal.Decimal, decimal.Decimal | None]:
    """Lower, upper and (for ``m >= 6``) tight bound at ``DIGITS`` significant digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = DIGITS
        D = decimal.Decimal
        ln2 = D(2).ln()
        b = (2 * ln2 - 1) / (2 * ln2)
        s = D((m + 1) ** 2) / 4
        log = D(m + 1).ln() / ln2
        tight = s * (log + (m - 1) * b / m) if m >= 6 else None
        return s * log, s * (log + b), tight


@dataclass
class BoundsReport:
    """Bound values are rounded to doubles for display; the flags are exact."""

    m: int
    a: int
    lower: float
    upper: float
    tight_upper: float | None
    lower_equality: bool
    lower_ok: bool
    upper_ok: bool
    tight_ok: bool | None
    guard_band: float = GUARD

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok and self.tight_ok is not False


def check_bounds(m: int) -> BoundsReport:
    """Evaluate both bounds (and the sharper one for ``m >= 6``) at ``m``.

    The lower bound is compared in integers when ``m + 1`` is a power of two
    (where it is attained); every other comparison uses 60-digit decimals.
    """
    if m < 0:
        raise DomainViolationError(f"m must be >= 0, got {m}")
    a = a_rec(m)
    lower, upper, tight = _decimal_bounds(m)
    exact = exact_lower(m)
    if exact is not None:
        lower_equality = a == exact
        lower_ok = a >= exact
    else:
        lower_equality = False
        lower_ok = a > lower
    tight_ok = None if tight is None else a < tight
    return BoundsReport(
        m,
        a,
        float(lower),
        float(upper),
        None if tight is None else float(tight),
        lower_equality,
        lower_ok,
        a < upper,
        tight_ok,
    )


@dataclass
class BoundsSweep:
    m_max: int
    lower_failures: list[int] = field(default_factory=list)
    upper_failures: list[int] = field(default_factory=list)
    tight_failures: list[int] = field(default_factory=list)
    lower_equalities: list[int] = field(default_factory=list)
    expected_equalities: list[int] = field(default_factory=list)
    min_lower_margin: float = math.inf
    min_upper_margin: float = math.inf
    min_tight_margin: float = math.inf

    @property
    def passed(self) -> bool:
        return (
            not self.lower_failures
            and not self.upper_failures
            and not self.tight_failures
            and self.lower_equalities == self.expected_equalities
        )

    def to_dict(self) -> dict:
        return {
            "m_max": self.m_max,
            "passed": self.passed,
            "lower_failures": self.lower_failures,
            "upper_failures": self.upper_failures,
            "tight_failures": self.tight_failures,
            "lower_equalities": self.lower_equalities,
            "min_relative_margin": {
                "lower": self.min_lower_margin,
                "upper": self.min_upper_margin,
                "tight": self.min_tight_margin,
            },
            "guard_band": GUARD,
        }


def check_bounds_sweep(m_max: int) -> BoundsSweep:
    """Check the bounds for every ``0 <= m <= m_max``.

    Doubles decide every point whose relative margin exceeds ``GUARD``; points
    inside the guard band are re-checked with :func:`check_bounds`. Reported
    margins are relative to the bound value and skip the exact-equality points
    for the lower bound.
    """
    table = a_table(m_max)
    a = np.array(table, dtype=np.float64)
    m = np.arange(m_max + 1, dtype=np.float64)
    s = (m + 1.0) ** 2 / 4.0
    log = np.log2(m + 1.0)
    lower, upper = s * log, s * (log + B)
    out = BoundsSweep(m_max)

    pow_idx = [(1 << k) - 1 for k in range(0, (m_max + 1).bit_length()) if (1 << k) - 1 <= m_max]
    out.expected_equalities = pow_idx
    exact_mask = np.zeros(m_max + 1, dtype=bool)
    exact_mask[pow_idx] = True
    for i in pow_idx:
        exact = exact_lower(i)
        if table[i] == exact:
            out.lower_equalities.append(i)
        elif table[i] < exact:
            out.lower_failures.append(i)

    def doubtful(margin: np.ndarray, scale: np.ndarray) -> list[int]:
        return np.nonzero(margin <= GUARD * scale)[0].tolist()

    rel_lower = np.where(exact_mask, np.inf, (a - lower) / np.maximum(lower, 1.0))
    for i in doubtful(np.where(exact_mask, np.inf, a - lower), lower):
        if not check_bounds(i).lower_ok:
            out.lower_failures.append(i)
    out.lower_failures.sort()
    out.min_lower_margin = float(rel_lower.min())

    out.upper_failures = [i for i in doubtful(upper - a, upper) if not check_bounds(i).upper_ok]
    out.min_upper_margin = float(((upper - a) / upper).min())

    if m_max >= 6:
        mt = m[6:]
        tight = s[6:] * (log[6:] + (mt - 1.0) * B / mt)
        out.tight_failures = [
            i + 6 for i in doubtful(tight - a[6:], tight) if not check_bounds(i + 6).tight_ok
        ]
        out.min_tight_margin = float(((tight - a[6:]) / tight).min())
    return out
