import math

import mpmath
import numpy as np
import pytest

from omegalab import series as ser
from omegalab.ddarith import DD
from omegalab.errors import InvalidArgument, OutOfRange, TruncationWarning
from omegalab.errterm import CIRCLE, DIVISOR, error_term


def test_single_cosine():
    s = ser.make_series([1.0], [1.0], 0.0)
    assert ser.eval_F(s, 0.25) == pytest.approx(0.0, abs=1e-15)
    s = ser.make_series([1.0], [1.0], math.pi)
    assert ser.eval_F(s, 0.0) == -1.0


def test_series_validation():
    with pytest.raises(InvalidArgument):
        ser.make_series([-1.0], [1.0])
    with pytest.raises(InvalidArgument):
        ser.make_series([1.0, 1.0], [2.0, 1.0])
    with pytest.raises(InvalidArgument):
        ser.eval_F(ser.make_series([1.0], [1.0]), 1.0, precision="single")


def test_divisor_and_circle_coefficients(small_table):
    d = ser.divisor_series(small_table, 100)
    assert d.f[0] == 1.0
    assert d.f[3] == pytest.approx(3 * 4 ** -0.75)
    assert d.f[3] == pytest.approx(1.06066, abs=1e-5)
    assert float(d.lam(9)) == 6.0 and d.beta == -math.pi / 4
    c = ser.circle_series(small_table, 100)
    assert c.f[2] == 0.0 and c.f[0] == 4.0
    assert float(c.lam(4)) == 2.0 and c.beta == math.pi / 4
    with pytest.raises(OutOfRange):
        ser.divisor_series(small_table, 10**5)


def test_piltz_coefficients(small_table):
    with pytest.warns(TruncationWarning):
        s = ser.piltz_series(small_table, 2, 10.0, 10)
    # (n/N)^(2/k) = 1/10 at n = 1 for k = 2
    assert s.f[0] == pytest.approx(math.exp(-math.pi ** 2 / 10))
    assert s.f[9] / (small_table.d[10] * 10 ** -0.75) == pytest.approx(math.exp(-math.pi ** 2))
    assert ser.piltz_beta(3) == 0.0
    assert ser.piltz_beta(7) == math.pi
    s3 = ser.piltz_series(small_table, 3, 4.0, ser.piltz_cutoff(3, 4.0))
    assert float(s3.lam(8)) == 6.0


def test_piltz_cutoff_is_sufficient():
    for k, N in ((2, 10.0), (3, 16.0), (5, 8.0)):
        c = ser.piltz_cutoff(k, N)
        ratio = math.exp(-math.pi ** 2 * ((c / N) ** (2 / k) - N ** (-2 / k)))
        assert ratio < 1e-16


def test_divisor_series_against_mp_oracle(small_table):
    s = ser.divisor_series(small_table, 1000)
    with mpmath.workdps(40):
        want = mpmath.fsum(
            int(small_table.d[n]) * mpmath.mpf(n) ** mpmath.mpf(-0.75)
            * mpmath.cos(4 * mpmath.pi * mpmath.sqrt(n) * 10 - mpmath.pi / 4)
            for n in range(1, 1001))
    assert ser.eval_F(s, 10.0) == pytest.approx(float(want), abs=1e-8)


def test_phase_reduction_against_mp_oracle():
    rng = np.random.default_rng(5)
    n = rng.integers(1, 10**8, 10**4).astype(np.float64)
    x = np.exp(rng.uniform(0, math.log(1e10 / 2 / 10**4), n.size))
    x = np.minimum(x, 1e10 / (2 * np.sqrt(n)))
    hi, lo = ser.dd_sqrt(n)
    got = ser.phase_frac(2 * hi, 2 * lo, DD(0.0, 0.0))
    assert np.all(got == 0)
    worst = 0.0
    with mpmath.workdps(40):
        for i in range(n.size):
            t = ser.phase_frac(2 * hi[i:i + 1], 2 * lo[i:i + 1], float(x[i]))[0]
            p = 2 * mpmath.sqrt(int(n[i])) * mpmath.mpf(float(x[i]))
            ref = p - mpmath.nint(p)
            worst = max(worst, abs(float(ref) - t) if abs(abs(ref) - 0.5) > 1e-6 else 0.0)
    assert worst < 1e-9


def test_linearity(small_table):
    a = ser.divisor_series(small_table, 500)
    b = ser.circle_series(small_table, 500)
    both = ser.ResonanceSeries(a.f + b.f / 3, a.lam_hi, a.lam_lo, a.beta)
    b_on_a = ser.ResonanceSeries(b.f / 3, a.lam_hi, a.lam_lo, a.beta)
    for x in (1.5, 17.25, 1234.5):
        assert ser.eval_F(both, x) == pytest.approx(
            ser.eval_F(a, x) + ser.eval_F(b_on_a, x), abs=1e-12)


def test_grid_matches_pointwise(small_table):
    s = ser.divisor_series(small_table, 2000)
    start, h, count = DD(1234.125, 0.0), 1.0 / 1789, 2500
    grid = ser.eval_F_grid(s, start, h, count, block=700)
    for j in (0, 1, 699, 700, 1401, count - 1):
        x = DD(*ser.dd_add(start.hi, start.lo, *ser.two_prod(float(j), h)))
        assert grid[j] == pytest.approx(ser.eval_F(s, x), abs=1e-9)


def test_approximations_near_ten_thousand(table):
    y = 1e4 + 0.5
    assert abs(ser.approx_delta(table, 10**6, y) - error_term(DIVISOR, table, y)) < 0.5
    assert abs(ser.approx_P(table, 10**6, y) - error_term(CIRCLE, table, y)) < 0.5
    with pytest.raises(InvalidArgument):
        ser.approx_delta(table, 100, 3.0)


def test_constants_are_the_s0_residues(table):
    """Without the constant the bare sums are off by zeta(0)^2 and by -1."""
    ys = [1234.5, 2345.5, 5000.5, 7777.5, 9876.5]
    bare_d = np.median([ser.approx_delta(table, 10**6, y, constant=False)
                        - error_term(DIVISOR, table, y) for y in ys])
    bare_p = np.median([ser.approx_P(table, 10**6, y, constant=False)
                        - error_term(CIRCLE, table, y) for y in ys])
    assert bare_d == pytest.approx(-0.25, abs=0.1)
    assert bare_p == pytest.approx(1.0, abs=0.15)


def test_gaussian_unit_mass():
    for k, N, x in ((2, 10.0, 5.0), (3, 7.0, 12.0), (2, 1000.0, 50.0)):
        mass = ser.gaussian_smooth(k, x, N, lambda y: np.ones_like(y))
        assert abs(mass - 1.0) < 1e-12
        assert ser.gaussian_smooth(k, x, N, lambda y: np.full_like(y, 3.5)) == pytest.approx(
            3.5, abs=1e-9)


def test_rhs_prefactor(small_table):
    pref = 4 ** 0.5 / (math.pi * math.sqrt(2))
    assert pref == pytest.approx(0.45016, abs=1e-5)
    cutoff = ser.piltz_cutoff(2, 10.0)
    s = ser.piltz_series(small_table, 2, 10.0, cutoff)
    assert ser.smoothed_rhs(2, small_table, 4.0, 10.0, cutoff) == pytest.approx(
        pref * ser.eval_F(s, 4.0), rel=1e-14)


def test_smoothed_lhs_range(small_table):
    with pytest.raises(OutOfRange) as info:
        ser.smoothed_lhs(2, small_table, 200.0, 10.0)
    assert info.value.needed_limit > 4 * 10**4


def test_piltz3_is_a_cosine_sum(small_table):
    s = ser.piltz_series(small_table, 3, 5.0, ser.piltz_cutoff(3, 5.0))
    assert ser.eval_F(s, 0.0) == pytest.approx(s.total, rel=1e-14)
