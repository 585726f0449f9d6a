import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import functions
from noisybool import errors
from noisybool.boolfn import BooleanFunction, complement, constant, dictator, lex, new
from noisybool.curve import (
    CSV_HEADER,
    LN2,
    EntropyUnit,
    baseline_bounds,
    big_f,
    big_f_values,
    big_t,
    binary_entropy,
    cond_prob_table,
    cond_prob_zero,
    fd_derivative,
    gap_curves,
    mutual_information,
    parse_grid,
    read_curve_csv,
    sample_curve,
)

GRID = np.linspace(0.0, 1.0, 101)
T44 = 1.0 - oracles.h2(0.25)

# ---------------------------------------------------------------- entropy


def test_binary_entropy_examples():
    assert binary_entropy(0.5, "bits") == 1.0
    assert binary_entropy(0.0, "nats") == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.25) == pytest.approx(0.811278, abs=5e-7)
    assert binary_entropy(0.25) == pytest.approx(-0.25 * math.log2(0.25) - 0.75 * math.log2(0.75), abs=1e-15)


@given(st.floats(0.0, 1.0))
def test_entropy_units_differ_by_ln2(p):
    assert binary_entropy(p, EntropyUnit.NATS) == pytest.approx(binary_entropy(p, EntropyUnit.BITS) * LN2, abs=1e-15)


def test_binary_entropy_vectorized():
    p = np.array([0.0, 0.25, 0.5, 1.0])
    assert np.allclose(binary_entropy(p), [0.0, oracles.h2(0.25), 1.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_binary_entropy_rejects(p):
    with pytest.raises(errors.ProbabilityOutOfRangeError):
        binary_entropy(p)


# ---------------------------------------------------------------- posteriors


def test_cond_prob_examples():
    for y in range(16):
        assert cond_prob_zero(lex(4, 4), y, 0.5) == pytest.approx(0.25, abs=1e-15)
    for a in (0.0, 0.1, 0.37, 1.0):
        assert cond_prob_zero(dictator(3, 1), 0, a) == pytest.approx(1 - a, abs=1e-15)
    assert cond_prob_zero(constant(3, 0), 5, 0.3) == pytest.approx(1.0, abs=1e-15)


def test_cond_prob_rejects():
    with pytest.raises(errors.CodewordOutOfRangeError):
        cond_prob_zero(lex(3, 2), 8, 0.2)
    with pytest.raises(errors.ProbabilityOutOfRangeError):
        cond_prob_zero(lex(3, 2), 0, 1.2)


def test_cond_prob_matches_joint_oracle(rng):
    for _ in range(40):
        n = int(rng.integers(1, 5))
        f = BooleanFunction(n, np.flatnonzero(rng.integers(0, 2, 1 << n)))
        y = int(rng.integers(0, 1 << n))
        a = float(rng.uniform(0.01, 0.99))
        assert cond_prob_zero(f, y, a) == pytest.approx(oracles.posterior_zero(n, f.zeros, y, a), abs=1e-13)


@given(functions(max_n=6), st.floats(0.001, 0.999))
def test_posteriors_sum_to_zero_set_size(f, a):
    table = cond_prob_table(f, a)
    assert np.all((table >= 0.0) & (table <= 1.0))
    assert abs(math.fsum(table) - f.M) <= 1e-9


# ---------------------------------------------------------------- F, T, I


def test_big_f_examples():
    assert big_f(dictator(4, 1), 0.3) == pytest.approx(0.0, abs=1e-15)
    assert big_f(lex(4, 4), 0.5) == pytest.approx(T44, abs=1e-12)
    assert big_f(lex(4, 4), 0.5) == pytest.approx(0.188722, abs=5e-7)


def test_big_t_examples():
    for n, i in ((1, 1), (3, 2), (5, 5)):
        assert big_t(dictator(n, i)) == 0.0
    assert big_t(lex(4, 4)) == pytest.approx(0.188722, abs=5e-7)
    assert big_t(constant(3, 1)) == 1.0
    assert big_t(constant(3, 1), "nats") == pytest.approx(LN2, abs=1e-16)


def test_mutual_information_examples():
    for a in GRID:
        assert abs(mutual_information(dictator(4, 1), a) - (1 - oracles.h2(a))) <= 1e-12
    assert mutual_information(new(3, {0, 5, 6}), 0.5) == pytest.approx(0.0, abs=1e-15)
    assert mutual_information(lex(4, 4), 0.0) == pytest.approx(oracles.h2(0.25), abs=1e-15)


def test_gap_curve_matches_joint_distribution_oracle(rng):
    alphas = [0.0, 0.05, 0.2, 0.5, 0.71, 1.0]
    for _ in range(25):
        n = int(rng.integers(1, 5))
        f = BooleanFunction(n, np.flatnonzero(rng.integers(0, 2, 1 << n)))
        ours = big_f_values(f, alphas)
        ref = [oracles.gap_bits(n, f.zeros, a) for a in alphas]
        assert np.allclose(ours, ref, rtol=0, atol=1e-12)
        for a in alphas:
            assert mutual_information(f, a) == pytest.approx(oracles.mutual_information_bits(n, f.zeros, a), abs=1e-12)


@given(functions(max_n=4))
def test_information_identity_and_ceiling(f):
    # I = F - H(alpha) + H(M/S), and I never exceeds 1 - H(alpha) for these small n
    for a in (0.03, 0.2, 0.45):
        i = mutual_information(f, a)
        assert i == pytest.approx(big_f(f, a) - oracles.h2(a) + oracles.h2(f.M / f.size), abs=1e-12)
        assert i <= 1 - oracles.h2(a) + 1e-12


@given(functions(max_n=4))
def test_symmetry_complement_and_midpoint(f):
    F = big_f_values(f, GRID)
    assert np.max(np.abs(F - big_f_values(f, 1.0 - GRID))) <= 1e-12
    assert np.max(np.abs(F - big_f_values(complement(f), GRID))) <= 1e-12
    assert abs(big_f(f, 0.5) - big_t(f)) <= 1e-12


def test_nats_are_bits_times_ln2(rng):
    f = BooleanFunction(4, np.flatnonzero(rng.integers(0, 2, 16)))
    assert np.allclose(big_f_values(f, GRID, "nats"), LN2 * big_f_values(f, GRID, "bits"), atol=1e-15)


def test_batch_kernel_is_bitwise_equal_to_single(rng):
    for n in (3, 4, 5):
        Z = rng.integers(0, 2, size=(30, 1 << n)).astype(bool)
        batch = gap_curves(Z, n, GRID)
        for row, values in zip(Z, batch):
            assert np.array_equal(values, big_f_values(BooleanFunction(n, np.flatnonzero(row)), GRID))
        # result for a row does not depend on its neighbours in the batch
        assert np.array_equal(gap_curves(Z[7:19], n, GRID), batch[7:19])


# ---------------------------------------------------------------- baselines and derivatives


def test_baseline_examples():
    assert baseline_bounds(0.5) == (0.0, 0.0)
    assert baseline_bounds(0.25)[0] == 0.25
    assert baseline_bounds(0.0) == (1.0, None)
    lo = 0.5 * (1 - 1 / math.sqrt(3))
    assert baseline_bounds(lo + 1e-12)[1] is not None
    assert baseline_bounds(lo - 1e-9)[1] is None
    assert baseline_bounds(1 - lo - 1e-12)[1] is not None


def test_fd_examples():
    for f in (lex(4, 4), new(4, {0, 1, 2, 4}), new(3, {1, 6})):
        assert abs(fd_derivative(f, 0.5, 1, 1e-4)) <= 1e-6
    assert abs(fd_derivative(dictator(4, 1), 0.5, 2, 1e-4)) <= 1e-6
    assert abs(fd_derivative(lex(4, 4), 0.5, 2, 1e-4) + 4 / 3) <= 1e-5


@pytest.mark.parametrize("alpha, h", [(0.0, 1e-4), (0.5, 0.6), (0.99995, 1e-4), (0.5, 0.0), (0.5, -1e-3)])
def test_fd_rejects_steps_leaving_domain(alpha, h):
    with pytest.raises(errors.StepOutOfDomainError):
        fd_derivative(lex(3, 3), alpha, 2, h)


def test_fd_constant_function_is_entropy_curvature():
    # F = H(alpha) for a constant function, and H''(1/2) = -4 nats
    assert fd_derivative(constant(3, 1), 0.5, 2, 1e-4) == pytest.approx(-4.0, abs=1e-5)


def test_fd_richardson_order(rng):
    """Halving h cuts the second-difference error by about four."""
    h = 1e-3
    for _ in range(100):
        zeros = np.flatnonzero(rng.integers(0, 2, 16))
        f = BooleanFunction(4, zeros)
        a = float(rng.uniform(0.05, 0.95))
        d = [fd_derivative(f, a, 2, h / 2**k) for k in range(3)]
        e1, e2 = d[0] - d[1], d[1] - d[2]
        # O(h^2): e1 = 4 e2 up to higher-order terms and rounding
        assert abs(e1 - 4 * e2) <= 0.05 * abs(e1) + 1e-6
        # the extrapolated value agrees with the finest difference
        assert abs((4 * d[1] - d[0]) / 3 - d[2]) <= 1e-4 * max(1.0, abs(d[2]))


# ---------------------------------------------------------------- tables and CSV


def test_parse_grid():
    g = parse_grid("0:0.01:1")
    assert g.size == 101 and g[0] == 0.0 and g[-1] == 1.0
    assert parse_grid("0.25:0.25:0.75").tolist() == [0.25, 0.5, 0.75]
    for bad in ("0:0.03:1", "0:0:1", "1:0.1:0", "0:0.5:2", "a:b:c", "0:1"):
        with pytest.raises(errors.InvalidGridError):
            parse_grid(bad)


def test_sample_curve_examples():
    t = sample_curve(lex(4, 4), parse_grid("0:0.01:1"))
    k = int(np.argmax(t.F))
    assert t.grid[k] == pytest.approx(0.5) and t.F[k] == pytest.approx(t.T, abs=1e-12)
    w = sample_curve(new(4, {0, 1, 2, 4}), parse_grid("0:0.01:1"))
    mid = int(np.argmin(np.abs(w.grid - 0.5)))
    assert w.F[mid] == pytest.approx(w.T, abs=1e-12)
    inner = w.F[1:-1]
    dips = (inner < w.F[:-2]) & (inner < w.F[2:])
    assert dips.sum() == 2
    # zero up to rounding in the posterior sums
    assert np.max(np.abs(sample_curve(dictator(4, 1), GRID).F)) <= 1e-15


def test_curve_table_validation():
    with pytest.raises(errors.InvalidGridError):
        sample_curve(lex(2, 1), [0.5, 0.2])
    with pytest.raises(errors.InvalidGridError):
        sample_curve(lex(2, 1), [0.1, 1.1])


def test_csv_format_and_round_trip():
    t = sample_curve(new(3, {0, 3}), GRID, "nats")
    text = t.to_csv()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    rows = read_curve_csv(text)
    assert len(rows) == 101
    for k, row in enumerate(rows):
        assert float(row["alpha"]) == t.grid[k]
        assert float(row["F"]) == t.F[k]  # 17 significant digits survive a round trip
        assert row["unit"] == "nats"
        assert float(row["erkip"]) == pytest.approx(LN2 * (1 - 2 * t.grid[k]) ** 2, abs=1e-15)
        osw = baseline_bounds(float(t.grid[k]))[1]
        assert (row["osw"] == "") == (osw is None)


def test_csv_without_baselines_and_with_series():
    t = sample_curve(lex(2, 1), GRID, include_baselines=False)
    buf = io.StringIO()
    t.write_csv(buf, series="x")
    rows = read_curve_csv(buf.getvalue())
    assert rows[0]["series"] == "x" and rows[0]["erkip"] == "" and rows[0]["osw"] == ""
    assert t.function == lex(2, 1)
