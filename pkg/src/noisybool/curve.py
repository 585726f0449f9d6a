"""Exact evaluation of the gap curve ``F_f(alpha) = H(alpha) - H(f(X)|Y)``.

``X`` is uniform on the n-cube and ``Y`` is ``X`` sent through a BSC with
crossover ``alpha``. For each output ``y`` the posterior

    Pr{f(X)=0 | y} = sum_{x in f^{-1}(0)} alpha^d(x,y) (1-alpha)^(n-d(x,y))

depends on the zero-set only through the histogram of Hamming distances from
``y``; histograms are computed once per function and reused for every alpha.
Single-function and batch evaluation share one kernel, so exhaustive sweeps
reproduce single-function values bit for bit.
"""
from __future__ import annotations

import csv
import enum
import functools
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .boolfn import BooleanFunction
from .errors import (
    CodewordOutOfRangeError,
    InvalidGridError,
    ProbabilityOutOfRangeError,
    StepOutOfDomainError,
)

LN2 = math.log(2.0)
OSW_RADIUS = 0.5 / math.sqrt(3.0)


class EntropyUnit(str, enum.Enum):
    BITS = "bits"
    NATS = "nats"

    @property
    def one_bit(self) -> float:
        """One bit expressed in this unit."""
        return 1.0 if self is EntropyUnit.BITS else LN2


def _unit(unit: EntropyUnit | str) -> EntropyUnit:
    return EntropyUnit(unit)


def _check_prob(p) -> None:
    arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ProbabilityOutOfRangeError(f"probability outside [0, 1]: {p!r}")


def _entropy_unchecked(p: np.ndarray, unit: EntropyUnit) -> np.ndarray:
    log = np.log2 if unit is EntropyUnit.BITS else np.log
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(p > 0.0, -p * log(np.where(p > 0.0, p, 1.0)), 0.0)
        b = np.where(q > 0.0, -q * log(np.where(q > 0.0, q, 1.0)), 0.0)
    return a + b


def binary_entropy(p, unit: EntropyUnit | str = EntropyUnit.BITS):
    """Binary entropy of ``p`` (scalar or array); ``H(0) = H(1) = 0``."""
    _check_prob(p)
    out = _entropy_unchecked(np.asarray(p, dtype=float), _unit(unit))
    return float(out) if out.ndim == 0 else out


@functools.lru_cache(maxsize=16)
def _distance_indicator(n: int) -> np.ndarray:
    """``D[x, y*(n+1) + d] = 1`` iff ``d(x, y) = d``; shape ``(S, S*(n+1))``."""
    S = 1 << n
    x = np.arange(S, dtype=np.uint64)
    dist = np.bitwise_count(x[:, None] ^ x[None, :]).astype(np.int64)
    D = np.zeros((S, S, n + 1), dtype=np.int64)
    np.put_along_axis(D, dist[:, :, None], 1, axis=2)
    return D.reshape(S, S * (n + 1))


def distance_histograms(indicators: np.ndarray, n: int) -> np.ndarray:
    """Hamming-distance histograms for a batch of zero-sets.

    ``indicators`` is ``(F, 2^n)`` boolean; the result ``h`` has shape
    ``(F, 2^n, n+1)`` with ``h[f, y, d] = #{x in zero-set f : d(x, y) = d}``.
    """
    Z = np.asarray(indicators).astype(np.int64)
    S = 1 << n
    return (Z @ _distance_indicator(n)).reshape(Z.shape[0], S, n + 1)


@functools.lru_cache(maxsize=256)
def distance_histogram(f: BooleanFunction) -> np.ndarray:
    """``(2^n, n+1)`` distance histogram of ``f``'s zero-set from each ``y``."""
    S, n = f.size, f.n
    if n <= 10:
        hist = distance_histograms(f.indicator()[None, :], n)[0]
    else:
        hist = np.zeros((S, n + 1), dtype=np.int64)
        y = np.arange(S, dtype=np.uint64)
        for x in f.zeros:
            d = np.bitwise_count(y ^ np.uint64(x)).astype(np.int64)
            hist[np.arange(S), d] += 1
    hist.setflags(write=False)
    return hist


def _basis(alphas: np.ndarray, n: int) -> np.ndarray:
    """``B[a, d] = alpha_a^d (1 - alpha_a)^(n - d)``, shape ``(A, n+1)``."""
    d = np.arange(n + 1)
    a = alphas[:, None]
    return np.power(a, d) * np.power(1.0 - a, n - d)


def _posteriors(hist: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Contract ``(..., n+1)`` histograms with the basis, summing in fixed ``d`` order."""
    out = np.zeros(hist.shape[:-1] + (basis.shape[0],), dtype=float)
    for d in range(hist.shape[-1]):
        out += hist[..., d, None] * basis[:, d]
    return np.clip(out, 0.0, 1.0)


def _as_alphas(alpha) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(alpha, dtype=float))
    _check_prob(arr)
    return arr


def cond_prob_zero(f: BooleanFunction, y: int, alpha: float) -> float:
    """``Pr{f(X)=0 | Y=y}`` at crossover ``alpha``."""
    if not 0 <= y < f.size:
        raise CodewordOutOfRangeError(f"codeword {y} is outside [0, {f.size})")
    alphas = _as_alphas(alpha)
    return float(_posteriors(distance_histogram(f)[y], _basis(alphas, f.n))[0])


def cond_prob_table(f: BooleanFunction, alpha: float) -> np.ndarray:
    """Posterior ``Pr{f(X)=0 | y}`` for every ``y`` in increasing order."""
    alphas = _as_alphas(alpha)
    return _posteriors(distance_histogram(f), _basis(alphas, f.n))[:, 0]


def _mean_over_outputs(values: np.ndarray) -> np.ndarray:
    """Average over the output axis (axis 1), adding outputs in codeword order."""
    acc = np.zeros((values.shape[0],) + values.shape[2:], dtype=float)
    for y in range(values.shape[1]):
        acc += values[:, y]
    return acc / values.shape[1]


def _conditional_entropy(hist: np.ndarray, alphas: np.ndarray, n: int, unit: EntropyUnit) -> np.ndarray:
    post = _posteriors(hist, _basis(alphas, n))
    return _mean_over_outputs(_entropy_unchecked(post, unit))


def _chunk_rows(n: int, n_alphas: int) -> int:
    return max(1, (1 << 22) // ((1 << n) * max(n_alphas, 1)))


def gap_curves(indicators: np.ndarray, n: int, alphas, unit: EntropyUnit | str = EntropyUnit.BITS) -> np.ndarray:
    """``F_f(alpha)`` for a batch of zero-sets; returns shape ``(F, A)``."""
    unit = _unit(unit)
    alphas = _as_alphas(alphas)
    Z = np.atleast_2d(np.asarray(indicators, dtype=bool))
    h_alpha = _entropy_unchecked(alphas, unit)
    out = np.empty((Z.shape[0], alphas.size), dtype=float)
    step = _chunk_rows(n, alphas.size)
    for start in range(0, Z.shape[0], step):
        hist = distance_histograms(Z[start:start + step], n)
        out[start:start + step] = h_alpha - _conditional_entropy(hist, alphas, n, unit)
    return out


def big_f(f: BooleanFunction, alpha: float, unit: EntropyUnit | str = EntropyUnit.BITS) -> float:
    return float(big_f_values(f, [alpha], unit)[0])


def big_f_values(f: BooleanFunction, alphas, unit: EntropyUnit | str = EntropyUnit.BITS) -> np.ndarray:
    unit = _unit(unit)
    alphas = _as_alphas(alphas)
    cond = _conditional_entropy(distance_histogram(f)[None], alphas, f.n, unit)[0]
    return _entropy_unchecked(alphas, unit) - cond


def t_value(M, n: int, unit: EntropyUnit | str = EntropyUnit.BITS):
    """``1 bit - H(M / 2^n)`` in the requested unit; ``M`` may be an array."""
    unit = _unit(unit)
    p = np.asarray(M, dtype=float) / float(1 << n)
    out = unit.one_bit - _entropy_unchecked(p, unit)
    return float(out) if out.ndim == 0 else out


def big_t(f: BooleanFunction, unit: EntropyUnit | str = EntropyUnit.BITS) -> float:
    return t_value(f.M, f.n, unit)


def mutual_information(f: BooleanFunction, alpha: float, unit: EntropyUnit | str = EntropyUnit.BITS) -> float:
    """``I(f(X); Y) = H(f(X)) - H(f(X) | Y)``."""
    unit = _unit(unit)
    alphas = _as_alphas(alpha)
    h_f = float(_entropy_unchecked(np.float64(f.M / f.size), unit))
    cond = _conditional_entropy(distance_histogram(f)[None], alphas, f.n, unit)[0, 0]
    return h_f - float(cond)


def baseline_bounds(alpha: float) -> tuple[float, float | None]:
    """Prior upper bounds on ``I(f(X); Y)`` in bits.

    Returns ``(erkip, osw)``: ``(1 - 2a)^2`` for all ``a``, and the
    balanced-function bound ``(log2 e / 2)(1-2a)^2 + 9(1 - log2 e / 2)(1-2a)^4``,
    which is only valid for ``|a - 1/2| <= 1 / (2 sqrt 3)`` (``None`` elsewhere).
    """
    _check_prob(alpha)
    s = (1.0 - 2.0 * alpha) ** 2
    erkip = s
    if abs(alpha - 0.5) > OSW_RADIUS:
        return erkip, None
    c = math.log2(math.e) / 2.0
    return erkip, c * s + 9.0 * (1.0 - c) * s * s


def fd_derivative(f: BooleanFunction, alpha: float, order: int = 2, h: float = 1e-4) -> float:
    """Central finite difference of ``F_f`` in nats."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not h > 0 or not (0.0 < alpha - h and alpha + h < 1.0):
        raise StepOutOfDomainError(f"alpha={alpha} with h={h} leaves (0, 1)")
    lo, mid, hi = big_f_values(f, [alpha - h, alpha, alpha + h], EntropyUnit.NATS)
    if order == 1:
        return float((hi - lo) / (2.0 * h))
    return float((hi - 2.0 * mid + lo) / (h * h))


def parse_grid(text: str) -> np.ndarray:
    """Parse ``start:step:end`` into an inclusive grid inside ``[0, 1]``."""
    try:
        start, step, end = (float(p) for p in text.split(":"))
    except ValueError:
        raise InvalidGridError(f"expected start:step:end, got {text!r}") from None
    if not step > 0 or end < start:
        raise InvalidGridError(f"grid {text!r} is empty or has a nonpositive step")
    count = (end - start) / step
    if abs(count - round(count)) > 1e-9 * max(1.0, count):
        raise InvalidGridError(f"step {step} does not divide [{start}, {end}]")
    grid = np.linspace(start, end, int(round(count)) + 1)
    check_grid(grid)
    return grid


def check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise InvalidGridError("grid must be a nonempty 1-D sequence")
    if np.any(g < 0.0) or np.any(g > 1.0):
        raise InvalidGridError("grid values must lie in [0, 1]")
    if np.any(np.diff(g) <= 0.0):
        raise InvalidGridError("grid must be strictly increasing")
    return g


def fmt(x: float | None) -> str:
    """Full-precision decimal, empty for missing values."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(float(x), ".17g")


CSV_HEADER = ("alpha", "F", "unit", "T", "erkip", "osw")


@dataclass
class CurveTable:
    n: int
    zeros: tuple[int, ...]
    unit: EntropyUnit
    grid: np.ndarray
    F: np.ndarray
    T: float
    erkip: np.ndarray | None = None  # baselines are converted to ``unit``
    osw: np.ndarray | None = None  # NaN outside the bound's validity range

    def __post_init__(self):
        self.grid = check_grid(self.grid)
        self.F = np.asarray(self.F, dtype=float)
        if self.F.shape != self.grid.shape:
            raise ValueError("F and grid must have equal length")

    @property
    def function(self) -> BooleanFunction:
        return BooleanFunction(self.n, self.zeros)

    def rows(self) -> Iterable[tuple[str, ...]]:
        for k, a in enumerate(self.grid):
            erkip = None if self.erkip is None else self.erkip[k]
            osw = None if self.osw is None else self.osw[k]
            yield (fmt(a), fmt(self.F[k]), self.unit.value, fmt(self.T), fmt(erkip), fmt(osw))

    def write_csv(self, out: TextIO, series: str | None = None, header: bool = True) -> None:
        w = csv.writer(out, lineterminator="\n")
        if header:
            w.writerow((("series",) if series is not None else ()) + CSV_HEADER)
        for row in self.rows():
            w.writerow(((series,) if series is not None else ()) + row)

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def read_curve_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def sample_curve(
    f: BooleanFunction,
    grid: Sequence[float] | np.ndarray,
    unit: EntropyUnit | str = EntropyUnit.BITS,
    include_baselines: bool = True,
) -> CurveTable:
    unit = _unit(unit)
    g = check_grid(grid)
    erkip = osw = None
    if include_baselines:
        pairs = [baseline_bounds(float(a)) for a in g]
        erkip = unit.one_bit * np.array([p[0] for p in pairs])
        osw = unit.one_bit * np.array([np.nan if p[1] is None else p[1] for p in pairs])
    return CurveTable(
        n=f.n,
        zeros=f.zeros,
        unit=unit,
        grid=g,
        F=big_f_values(f, g, unit),
        T=big_t(f, unit),
        erkip=erkip,
        osw=osw,
    )
