"""Boolean functions on the n-cube and the column statistics of their zero-sets.

A function ``f: {0,1}^n -> {0,1}`` is stored by its zero-set ``f^{-1}(0)``.
Codewords are integers in ``[0, 2^n)`` with ``x_1`` as the most significant
bit, so the lexicographic order of binary strings is the integer order.
"""
from __future__ import annotations

import bisect
import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CoordinateOutOfRangeError,
    DimensionTooLargeError,
    DuplicateElementError,
    ElementOutOfRangeError,
    EmptyZeroSetError,
    InvalidDimensionError,
    LengthMismatchError,
    ParseError,
    SizeOutOfRangeError,
)

MAX_DIMENSION = 24


def _check_dimension(n: int) -> None:
    if int(n) != n or n < 1:
        raise InvalidDimensionError(f"dimension must be a positive integer, got {n!r}")
    if n > MAX_DIMENSION:
        raise DimensionTooLargeError(f"n={n} exceeds the supported maximum {MAX_DIMENSION}")


@dataclass(frozen=True)
class BooleanFunction:
    """Boolean function given by dimension ``n`` and its zero-set.

    The zero-set is validated and stored sorted, so two instances compare
    equal exactly when they describe the same function.
    """

    n: int
    zeros: tuple[int, ...]

    def __init__(self, n: int, zeros: Iterable[int] = ()):
        _check_dimension(n)
        items = [int(x) for x in zeros]
        size = 1 << n
        for x in items:
            if not 0 <= x < size:
                raise ElementOutOfRangeError(f"codeword {x} is outside [0, {size})")
        ordered = tuple(sorted(items))
        for a, b in zip(ordered, ordered[1:]):
            if a == b:
                raise DuplicateElementError(f"codeword {a} appears more than once")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "zeros", ordered)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "BooleanFunction":
        """Build from a bitmask where bit ``j`` set means ``j`` is in the zero-set."""
        _check_dimension(n)
        if mask < 0 or mask >> (1 << n):
            raise ElementOutOfRangeError(f"mask {mask:#x} has bits beyond 2^{n}")
        return cls(n, (j for j in range(1 << n) if (mask >> j) & 1))

    @property
    def size(self) -> int:
        """Cube size ``S = 2^n``."""
        return 1 << self.n

    @property
    def M(self) -> int:
        return len(self.zeros)

    @property
    def mask(self) -> int:
        out = 0
        for x in self.zeros:
            out |= 1 << x
        return out

    def indicator(self) -> np.ndarray:
        """Boolean vector of length ``2^n`` marking the zero-set."""
        out = np.zeros(self.size, dtype=bool)
        out[list(self.zeros)] = True
        return out

    def __contains__(self, x: int) -> bool:
        i = bisect.bisect_left(self.zeros, x)
        return i < len(self.zeros) and self.zeros[i] == x

    def __call__(self, x: int) -> int:
        return 0 if x in self else 1

    def __str__(self) -> str:
        return format_function(self)


def new(n: int, zeros: Iterable[int]) -> BooleanFunction:
    return BooleanFunction(n, zeros)


def lex(n: int, M: int) -> BooleanFunction:
    """Function whose zero-set is the first ``M`` codewords in lexicographic order."""
    _check_dimension(n)
    if not 0 <= M <= 1 << n:
        raise SizeOutOfRangeError(f"M={M} is outside [0, 2^{n}]")
    return BooleanFunction(n, range(M))


def dictator(n: int, i: int) -> BooleanFunction:
    """``f(x) = x_i``; coordinates are 1-based with ``x_1`` the MSB."""
    _check_dimension(n)
    if not 1 <= i <= n:
        raise CoordinateOutOfRangeError(f"coordinate {i} is outside [1, {n}]")
    shift = n - i
    return BooleanFunction(n, (x for x in range(1 << n) if not (x >> shift) & 1))


def constant(n: int, value: int) -> BooleanFunction:
    return BooleanFunction(n, () if value else range(1 << n))


def complement(f: BooleanFunction) -> BooleanFunction:
    """Output complement: the new zero-set is the old one-set."""
    present = set(f.zeros)
    return BooleanFunction(f.n, (x for x in range(f.size) if x not in present))


def bit_matrix(n: int) -> np.ndarray:
    """``(2^n, n)`` array of codeword bits, column ``k`` is coordinate ``k+1``."""
    x = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((x[:, None] >> shifts) & 1).astype(np.int64)


def column_one_counts(f: BooleanFunction) -> tuple[int, ...]:
    """Number of zero-set elements with a 1 in each coordinate."""
    if not f.zeros:
        return (0,) * f.n
    arr = np.asarray(f.zeros, dtype=np.int64)
    shifts = np.arange(f.n - 1, -1, -1, dtype=np.int64)
    counts = ((arr[:, None] >> shifts) & 1).sum(axis=0)
    return tuple(int(c) for c in counts)


def gammas(f: BooleanFunction) -> tuple[int, ...]:
    """Per-coordinate minority count ``min(#ones, #zeros)`` over the zero-set."""
    M = f.M
    return tuple(min(c, M - c) for c in column_one_counts(f))


def lex_column_count(n: int, M: int, i: int) -> int:
    """Column ``i`` one-count of ``lex(n, M)`` via the floor-sum formula.

    ``sum_{k=0}^{2^{n-i}-1} floor((M + k) / 2^{n+1-i})``
    """
    _check_dimension(n)
    if not 0 <= M <= 1 << n:
        raise SizeOutOfRangeError(f"M={M} is outside [0, 2^{n}]")
    if not 1 <= i <= n:
        raise CoordinateOutOfRangeError(f"coordinate {i} is outside [1, {n}]")
    k = np.arange(1 << (n - i), dtype=np.int64)
    return int(((M + k) // (1 << (n + 1 - i))).sum())


@dataclass(frozen=True)
class RatioSpectrum:
    """Histogram ``r`` of the minority counts, ``r[i] = #{k : gamma_k = i}``.

    Indices run over ``0..floor(M/2)``.
    """

    r: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(v) for v in self.r))
        if not self.r or any(v < 0 for v in self.r):
            raise ValueError(f"invalid ratio spectrum {self.r}")

    @property
    def m_half(self) -> int:
        return len(self.r) - 1

    @property
    def n(self) -> int:
        return sum(self.r)

    def __getitem__(self, i: int) -> int:
        return self.r[i]

    def __len__(self) -> int:
        return len(self.r)

    def __iter__(self):
        return iter(self.r)


@dataclass(frozen=True)
class WeightSpectrum:
    """Histogram ``c`` of exact column one-counts, indices ``0..M``."""

    c: tuple[int, ...]

    @property
    def M(self) -> int:
        return len(self.c) - 1

    def to_ratio(self) -> RatioSpectrum:
        M = self.M
        r = [0] * (M // 2 + 1)
        for t, count in enumerate(self.c):
            r[min(t, M - t)] += count
        return RatioSpectrum(tuple(r))


def ratio_spectrum(f: BooleanFunction) -> RatioSpectrum:
    if f.M == 0:
        raise EmptyZeroSetError("ratio spectrum needs a nonempty zero-set")
    r = [0] * (f.M // 2 + 1)
    for g in gammas(f):
        r[g] += 1
    return RatioSpectrum(tuple(r))


def weight_spectrum(f: BooleanFunction) -> WeightSpectrum:
    if f.M == 0:
        raise EmptyZeroSetError("weight spectrum needs a nonempty zero-set")
    c = [0] * (f.M + 1)
    for count in column_one_counts(f):
        c[count] += 1
    return WeightSpectrum(tuple(c))


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def spectrum_cmp(a: RatioSpectrum | Sequence[int], b: RatioSpectrum | Sequence[int]) -> Ordering:
    """Lexicographic comparison from index 0; ``GREATER`` means more mass at low indices first."""
    ta, tb = tuple(a), tuple(b)
    if len(ta) != len(tb):
        raise LengthMismatchError(f"spectra of lengths {len(ta)} and {len(tb)} are not comparable")
    if ta == tb:
        return Ordering.EQUAL
    return Ordering.GREATER if ta > tb else Ordering.LESS


_TEXT_RE = re.compile(
    r"^\s*n\s*=\s*(?P<n>\d+)\s*;\s*(?:zeros\s*=\s*(?P<zeros>[\d,\s]*)|mask\s*=\s*(?P<mask>0[xX][0-9a-fA-F]+|\d+))\s*$"
)


def parse_function(text: str) -> BooleanFunction:
    """Parse ``n=4; zeros=0,1,2,4`` or ``n=4; mask=0x0017``."""
    m = _TEXT_RE.match(text)
    if m is None:
        raise ParseError(f"cannot parse function description {text!r}")
    n = int(m.group("n"))
    if m.group("mask") is not None:
        return BooleanFunction.from_mask(n, int(m.group("mask"), 0))
    return BooleanFunction(n, parse_int_list(m.group("zeros")))


def parse_int_list(text: str) -> list[int]:
    parts = [p.strip() for p in text.split(",")]
    if parts == [""]:
        return []
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"expected comma-separated decimal integers, got {text!r}") from None


def format_function(f: BooleanFunction, *, as_mask: bool = False) -> str:
    if as_mask:
        width = max(1, f.size // 4)
        return f"n={f.n}; mask=0x{f.mask:0{width}x}"
    return f"n={f.n}; zeros=" + ",".join(str(x) for x in f.zeros)
