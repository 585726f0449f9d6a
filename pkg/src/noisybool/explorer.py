"""Exhaustive and sampled searches over Boolean functions.

Work is cut into fixed chunks of either mask-integer ranges (all zero-sets at
once) or rank ranges of M-subsets in ``itertools.combinations`` order. Chunk
boundaries never depend on the worker count and partial results are merged in
chunk order, so any ``workers`` value gives the same report.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Callable, Iterator, Sequence

import numpy as np

from .boolfn import BooleanFunction, RatioSpectrum, bit_matrix, lex, ratio_spectrum
from .curve import CurveTable, EntropyUnit, check_grid, gap_curves, t_value
from .errors import DegenerateSizeError, GridTooCoarseError, InstanceTooLargeError
from .spectral import d2_value, lex_sum_term

MAX_EXHAUSTIVE_N = 5
MAX_FUNCTIONS = 20_000_000
CHUNK = 8192
LIST_LIMIT = 64
DEDUP_MODES = ("none", "symmetry")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("NOISYBOOL_WORKERS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------- chunking


@dataclass(frozen=True)
class Chunk:
    n: int
    M: int | None  # None: every zero-set, addressed by mask integer
    start: int
    stop: int


def instance_count(n: int, M: int | None) -> int:
    S = 1 << n
    return 1 << S if M is None else math.comb(S, M)


def plan_chunks(n: int, M: int | None, chunk: int = CHUNK) -> list[Chunk]:
    if n > MAX_EXHAUSTIVE_N:
        raise InstanceTooLargeError(f"exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE_N}")
    if M is not None and not 0 <= M <= 1 << n:
        raise DegenerateSizeError(f"M={M} is outside [0, 2^{n}]")
    total = instance_count(n, M)
    if total > MAX_FUNCTIONS:
        raise InstanceTooLargeError(f"{total} functions exceed the limit of {MAX_FUNCTIONS}")
    return [Chunk(n, M, s, min(s + chunk, total)) for s in range(0, total, chunk)]


def chunk_indicators(c: Chunk) -> np.ndarray:
    """``(rows, 2^n)`` boolean zero-set indicators for a chunk."""
    S = 1 << c.n
    if c.M is None:
        masks = np.arange(c.start, c.stop, dtype=np.uint64)
        return ((masks[:, None] >> np.arange(S, dtype=np.uint64)) & np.uint64(1)).astype(bool)
    combos = list(itertools.islice(itertools.combinations(range(S), c.M), c.start, c.stop))
    Z = np.zeros((len(combos), S), dtype=bool)
    if c.M:
        idx = np.array(combos, dtype=np.int64)
        np.put_along_axis(Z, idx, True, axis=1)
    return Z


def _rows_to_sets(Z: np.ndarray) -> list[list[int]]:
    return [np.flatnonzero(row).tolist() for row in Z]


def _run(fn: Callable, chunks: Sequence[Chunk], workers: int) -> list:
    if workers <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


# ---------------------------------------------------------------- symmetry


@lru_cache(maxsize=8)
def cube_symmetries(n: int) -> np.ndarray:
    """Point maps of the hypercube automorphism group, shape ``(n! 2^n, 2^n)``.

    Row ``g`` sends codeword ``x`` to ``g[x]``: coordinates are permuted and
    then a fixed flip pattern is XORed in.
    """
    S = 1 << n
    bits = bit_matrix(n)
    weights = 1 << np.arange(n - 1, -1, -1)
    maps = []
    for perm in itertools.permutations(range(n)):
        permuted = bits[:, list(perm)] @ weights
        for flip in range(S):
            maps.append(permuted ^ flip)
    out = np.array(maps, dtype=np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def _inverse_maps(n: int) -> np.ndarray:
    maps = cube_symmetries(n)
    inv = np.empty_like(maps)
    np.put_along_axis(inv, maps, np.broadcast_to(np.arange(maps.shape[1]), maps.shape), axis=1)
    return inv


def _order_keys(Z: np.ndarray) -> np.ndarray:
    """Integer keys where a larger key means a lexicographically smaller sorted zero-set.

    Valid for equal-size zero-sets and ``2^n <= 62``.
    """
    S = Z.shape[-1]
    w = np.left_shift(np.int64(1), np.arange(S - 1, -1, -1, dtype=np.int64))
    return Z.astype(np.int64) @ w


def _orbit_keys(Z: np.ndarray, n: int, with_complement: bool) -> np.ndarray:
    inv = _inverse_maps(n)
    images = Z[:, inv]  # (rows, G, S)
    keys = _order_keys(images)
    if with_complement:
        keys = np.concatenate([keys, _order_keys(~images)], axis=1)
    return keys


def _uses_complement(n: int, M: int) -> bool:
    return 2 * M == 1 << n


def canonical_mask(Z: np.ndarray, n: int, M: int) -> np.ndarray:
    """Boolean mask of rows that are their orbit's canonical representative.

    The representative is the image with the lexicographically smallest sorted
    zero-set under coordinate permutations and flips, plus output complement
    when it preserves ``M`` (``2M = 2^n``).
    """
    if Z.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    out = np.empty(Z.shape[0], dtype=bool)
    step = max(1, (1 << 21) // (cube_symmetries(n).shape[0] * (1 << n)))
    for s in range(0, Z.shape[0], step):
        block = Z[s:s + step]
        keys = _orbit_keys(block, n, _uses_complement(n, M))
        out[s:s + step] = _order_keys(block) == keys.max(axis=1)
    return out


def orbit(f: BooleanFunction) -> list[BooleanFunction]:
    """All distinct images of ``f`` under the symmetry group used for dedup."""
    Z = f.indicator()[None, :]
    images = Z[:, _inverse_maps(f.n)][0]
    if _uses_complement(f.n, f.M):
        images = np.concatenate([images, ~images])
    uniq = np.unique(images, axis=0)
    return sorted((BooleanFunction(f.n, np.flatnonzero(r)) for r in uniq), key=lambda g: g.zeros)


def canonical(f: BooleanFunction) -> BooleanFunction:
    return orbit(f)[0]


def _select(Z: np.ndarray, c: Chunk, dedup: str) -> np.ndarray:
    if dedup == "none":
        return Z
    if c.M is None:
        raise ValueError("symmetry dedup needs a fixed M")
    return Z[canonical_mask(Z, c.n, c.M)]


def _check_dedup(dedup: str) -> None:
    if dedup not in DEDUP_MODES:
        raise ValueError(f"dedup must be one of {DEDUP_MODES}, got {dedup!r}")


def enumerate_functions(n: int, M: int, dedup: str = "none") -> Iterator[BooleanFunction]:
    """Every ``M``-subset of the cube (or one per symmetry orbit) as a function."""
    _check_dedup(dedup)
    for c in plan_chunks(n, M):
        for row in _select(chunk_indicators(c), c, dedup):
            yield BooleanFunction(n, np.flatnonzero(row))


def random_indicators(n: int, count: int, rng: np.random.Generator, M: int | None = None) -> np.ndarray:
    """Random zero-sets: uniform over all subsets, or uniform over ``M``-subsets."""
    S = 1 << n
    if M is None:
        return rng.integers(0, 2, size=(count, S)).astype(bool)
    Z = np.zeros((count, S), dtype=bool)
    for k in range(count):
        Z[k, rng.choice(S, size=M, replace=False)] = True
    return Z


# ---------------------------------------------------------------- F''(1/2) search


@dataclass
class SearchReport:
    n: int
    M: int
    functions_examined: int
    best_value: float
    argmax_zero_sets: list[list[int]]
    argmax_count: int
    lex_value: float
    lex_is_max: bool
    dedup_mode: str
    best_sum_term: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "functions_examined": self.functions_examined,
            "best_value": self.best_value,
            "argmax_zero_sets": sorted(self.argmax_zero_sets),
            "argmax_count": self.argmax_count,
            "argmax_truncated": self.argmax_count > len(self.argmax_zero_sets),
            "lex_value": self.lex_value,
            "lex_is_max": self.lex_is_max,
            "dedup_mode": self.dedup_mode,
            "unit": "nats",
        }


def sum_terms(Z: np.ndarray, n: int) -> np.ndarray:
    """Interaction sum ``sum_k (M - c_k) c_k`` for each row."""
    counts = Z.astype(np.int64) @ bit_matrix(n)
    M = Z.sum(axis=1, dtype=np.int64)[:, None]
    return ((M - counts) * counts).sum(axis=1)


def _d2_chunk(c: Chunk, dedup: str, limit: int | None):
    Z = _select(chunk_indicators(c), c, dedup)
    if Z.shape[0] == 0:
        return 0, None, [], 0
    s = sum_terms(Z, c.n)
    best = int(s.min())
    hits = np.flatnonzero(s == best)
    keep = hits if limit is None else hits[:limit]
    return Z.shape[0], best, _rows_to_sets(Z[keep]), int(hits.size)


def max_d2(n: int, M: int, dedup: str = "none", workers: int = 1, limit: int | None = LIST_LIMIT) -> SearchReport:
    """Exhaustive maximum of ``F''(1/2)`` over zero-sets of size ``M``.

    ``F''(1/2)`` is decreasing in the interaction sum for fixed ``(n, M)``, so
    the search minimizes that integer and ties are exact.
    """
    _check_dedup(dedup)
    if not 1 <= M <= (1 << n) - 1:
        raise DegenerateSizeError(f"M={M} must satisfy 1 <= M <= 2^{n} - 1")
    parts = _run(partial(_d2_chunk, dedup=dedup, limit=limit), plan_chunks(n, M), workers)
    examined = sum(p[0] for p in parts)
    best = min(p[1] for p in parts if p[1] is not None)
    argmax: list[list[int]] = []
    count = 0
    for _, b, sets, k in parts:
        if b == best:
            argmax.extend(sets)
            count += k
    if limit is not None:
        argmax = argmax[:limit]
    lex_s = lex_sum_term(n, M)
    best_value = d2_value(n, M, best)
    lex_value = d2_value(n, M, lex_s)
    return SearchReport(
        n=n,
        M=M,
        functions_examined=examined,
        best_value=best_value,
        argmax_zero_sets=argmax,
        argmax_count=count,
        lex_value=lex_value,
        lex_is_max=lex_s == best and abs(best_value - lex_value) <= 1e-12,
        dedup_mode=dedup,
        best_sum_term=best,
    )


# ---------------------------------------------------------------- ratio spectra


def spectra_rows(Z: np.ndarray, n: int, M: int) -> np.ndarray:
    """Ratio spectra of equal-size zero-sets, shape ``(rows, M//2 + 1)``."""
    counts = Z.astype(np.int64) @ bit_matrix(n)
    g = np.minimum(counts, M - counts)
    out = np.zeros((Z.shape[0], M // 2 + 1), dtype=np.int64)
    for k in range(n):
        np.add.at(out, (np.arange(Z.shape[0]), g[:, k]), 1)
    return out


def _lex_compare(spectra: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Sign of ``spectrum_cmp(row, ref)`` per row (-1, 0, 1)."""
    diff = spectra - ref
    nz = diff != 0
    first = np.argmax(nz, axis=1)
    sign = np.sign(diff[np.arange(diff.shape[0]), first])
    return np.where(nz.any(axis=1), sign, 0)


@dataclass
class LexSpectrumCheck:
    n: int
    M: int
    holds: bool
    functions_examined: int
    lex_spectrum: RatioSpectrum
    maximal_count: int
    counterexample: list[int] | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "holds": self.holds,
            "functions_examined": self.functions_examined,
            "lex_spectrum": list(self.lex_spectrum.r),
            "maximal_count": self.maximal_count,
            "counterexample": self.counterexample,
        }


def _lex_chunk(c: Chunk, ref: tuple[int, ...]):
    Z = chunk_indicators(c)
    cmp = _lex_compare(spectra_rows(Z, c.n, c.M), np.array(ref))
    bad = np.flatnonzero(cmp > 0)
    example = np.flatnonzero(Z[bad[0]]).tolist() if bad.size else None
    return Z.shape[0], int((cmp == 0).sum()), example


def verify_lex_max_spectrum(n: int, M: int, workers: int = 1) -> LexSpectrumCheck:
    """Check that no ``M``-subset has a ratio spectrum strictly above lex's."""
    if not 1 <= M <= 1 << n:
        raise DegenerateSizeError(f"M={M} must satisfy 1 <= M <= 2^{n}")
    ref = ratio_spectrum(lex(n, M))
    parts = _run(partial(_lex_chunk, ref=ref.r), plan_chunks(n, M), workers)
    example = next((p[2] for p in parts if p[2] is not None), None)
    return LexSpectrumCheck(
        n=n,
        M=M,
        holds=example is None,
        functions_examined=sum(p[0] for p in parts),
        lex_spectrum=ref,
        maximal_count=sum(p[1] for p in parts),
        counterexample=example,
    )


def verify_lex_max_spectrum_sampled(n: int, count: int, rng: np.random.Generator) -> LexSpectrumCheck:
    """Random-function version for dimensions too large to exhaust.

    Each sample is compared with the lex function of its own size; ``M`` is
    reported as ``-1`` because sizes vary.
    """
    Z = random_indicators(n, count, rng)
    sizes = Z.sum(axis=1)
    example = None
    maximal = examined = 0
    for M in np.unique(sizes):
        if M == 0:
            continue
        rows = Z[sizes == M]
        ref = np.array(ratio_spectrum(lex(n, int(M))).r)
        cmp = _lex_compare(spectra_rows(rows, n, int(M)), ref)
        examined += rows.shape[0]
        maximal += int((cmp == 0).sum())
        bad = np.flatnonzero(cmp > 0)
        if bad.size and example is None:
            example = np.flatnonzero(rows[bad[0]]).tolist()
    return LexSpectrumCheck(n, -1, example is None, examined, RatioSpectrum((0,)), maximal, example)


# ---------------------------------------------------------------- conjecture scan


@dataclass
class ConjectureScan:
    n: int
    M: int | None
    grid: np.ndarray
    tolerance: float
    unit: EntropyUnit
    functions_examined: int = 0
    violations: list[tuple[list[int], float, float]] = field(default_factory=list)
    violation_count: int = 0
    max_margin: float = -math.inf
    max_margin_at: tuple[list[int], float] | None = None

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "M": "all" if self.M is None else self.M,
            "grid": {"start": float(self.grid[0]), "end": float(self.grid[-1]), "points": int(self.grid.size)},
            "tolerance": self.tolerance,
            "unit": self.unit.value,
            "functions_examined": self.functions_examined,
            "violation_count": self.violation_count,
            "violations": [
                {"zero_set": z, "alpha": a, "margin": m} for z, a, m in sorted(self.violations)
            ],
            "max_margin": self.max_margin,
            "max_margin_at": None
            if self.max_margin_at is None
            else {"zero_set": self.max_margin_at[0], "alpha": self.max_margin_at[1]},
            "passed": self.passed,
        }


def _scan_chunk(c: Chunk, grid: np.ndarray, tolerance: float, unit: EntropyUnit, limit: int):
    Z = chunk_indicators(c)
    F = gap_curves(Z, c.n, grid, unit)
    T = t_value(Z.sum(axis=1), c.n, unit)
    margin = F - np.atleast_1d(T)[:, None]
    flat = int(np.argmax(margin))
    r, a = divmod(flat, grid.size)
    worst = (float(margin[r, a]), np.flatnonzero(Z[r]).tolist(), float(grid[a]))
    rows, cols = np.nonzero(margin > tolerance)
    listed = [
        (np.flatnonzero(Z[i]).tolist(), float(grid[j]), float(margin[i, j]))
        for i, j in zip(rows[:limit], cols[:limit])
    ]
    return Z.shape[0], listed, int(rows.size), worst


def conjecture_scan(
    n: int,
    M: int | None = None,
    grid: Sequence[float] | np.ndarray | None = None,
    tolerance: float = 1e-9,
    unit: EntropyUnit | str = EntropyUnit.BITS,
    workers: int = 1,
    limit: int = LIST_LIMIT,
) -> ConjectureScan:
    """Evaluate ``F_f(alpha) - T`` for every zero-set and grid point.

    A violation is a margin above ``tolerance``. A clean scan is numerical
    evidence on the grid only.
    """
    unit = EntropyUnit(unit)
    grid = check_grid(np.linspace(0.0, 1.0, 101) if grid is None else grid)
    fn = partial(_scan_chunk, grid=grid, tolerance=tolerance, unit=unit, limit=limit)
    report = ConjectureScan(n, M, grid, tolerance, unit)
    for examined, listed, k, worst in _run(fn, plan_chunks(n, M), workers):
        report.functions_examined += examined
        report.violation_count += k
        room = limit - len(report.violations)
        report.violations.extend(listed[:max(room, 0)])
        if worst[0] > report.max_margin:
            report.max_margin = worst[0]
            report.max_margin_at = (worst[1], worst[2])
    return report


# ---------------------------------------------------------------- shapes

SHAPES = ("quasi_concave", "single_peak_wave", "flat", "other")


@dataclass
class ShapeClass:
    kind: str
    extrema_locations: list[float]
    extrema_kinds: list[str]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "extrema_locations": self.extrema_locations, "extrema_kinds": self.extrema_kinds}


def classify_values(grid, values, tolerance: float = 1e-10) -> ShapeClass:
    """Classify a sampled curve by its strict interior extrema.

    Consecutive samples within ``tolerance`` of each other are merged into a
    plateau first. One interior maximum and nothing else is quasi-concave; a
    min-max-min pattern whose maximum covers the grid point nearest 1/2 is a
    single-peak wave.
    """
    grid = check_grid(grid)
    F = np.asarray(values, dtype=float)
    if grid.size < 101:
        raise GridTooCoarseError(f"need at least 101 grid points, got {grid.size}")
    if np.max(np.abs(F)) <= 1e-12:
        return ShapeClass("flat", [], [])
    runs = []  # (first index, last index, value)
    start = 0
    for k in range(1, F.size + 1):
        if k == F.size or abs(F[k] - F[k - 1]) > tolerance:
            runs.append((start, k - 1, F[start:k].mean()))
            start = k
    locs, kinds, spans = [], [], []
    for p in range(1, len(runs) - 1):
        left, here, right = runs[p - 1][2], runs[p][2], runs[p + 1][2]
        if here > left and here > right:
            kind = "max"
        elif here < left and here < right:
            kind = "min"
        else:
            continue
        i, j = runs[p][0], runs[p][1]
        locs.append(float((grid[i] + grid[j]) / 2.0))
        kinds.append(kind)
        spans.append((i, j))
    centre = int(np.argmin(np.abs(grid - 0.5)))
    if kinds == ["max"]:
        label = "quasi_concave"
    elif kinds == ["min", "max", "min"] and spans[1][0] <= centre <= spans[1][1]:
        label = "single_peak_wave"
    else:
        label = "other"
    return ShapeClass(label, locs, kinds)


def classify_shape(curve: CurveTable, tolerance: float = 1e-10) -> ShapeClass:
    return classify_values(curve.grid, curve.F, tolerance)


@dataclass
class ShapeCensus:
    n: int
    M: int | None
    functions_examined: int = 0
    counts: dict[str, int] = field(default_factory=lambda: {k: 0 for k in SHAPES})
    other_examples: list[list[int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "M": "all" if self.M is None else self.M,
            "functions_examined": self.functions_examined,
            "counts": dict(self.counts),
            "other_examples": sorted(self.other_examples),
        }


def _shape_chunk(c: Chunk, grid: np.ndarray, tolerance: float, dedup: str, limit: int):
    Z = _select(chunk_indicators(c), c, dedup)
    F = gap_curves(Z, c.n, grid, EntropyUnit.BITS)
    counts = {k: 0 for k in SHAPES}
    others = []
    for row, values in zip(Z, F):
        kind = classify_values(grid, values, tolerance).kind
        counts[kind] += 1
        if kind == "other" and len(others) < limit:
            others.append(np.flatnonzero(row).tolist())
    return Z.shape[0], counts, others


def shape_census(
    n: int,
    M: int | None = None,
    grid=None,
    tolerance: float = 1e-10,
    dedup: str = "none",
    workers: int = 1,
    limit: int = LIST_LIMIT,
) -> ShapeCensus:
    _check_dedup(dedup)
    grid = check_grid(np.linspace(0.0, 1.0, 101) if grid is None else grid)
    fn = partial(_shape_chunk, grid=grid, tolerance=tolerance, dedup=dedup, limit=limit)
    census = ShapeCensus(n, M)
    for examined, counts, others in _run(fn, plan_chunks(n, M), workers):
        census.functions_examined += examined
        for k, v in counts.items():
            census.counts[k] += v
        census.other_examples.extend(others[:max(limit - len(census.other_examples), 0)])
    return census
