import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from omegalab import dioph
from omegalab.ddarith import DD, dd_sqrt
from omegalab.errors import (ApproxNotFound, BudgetExceeded, InvalidArgument,
                             PrecisionLossError, RangeOverflowError)
from omegalab.lattice import gram_determinant, lll_reduce


def two_sqrt(n):
    h, l = dd_sqrt(float(n))
    return DD(2 * float(h), 2 * float(l))


def mp_dist(lam_exact, x: DD):
    """||lam x|| at 50 digits; lam_exact is an mpmath expression."""
    with mpmath.workdps(50):
        p = lam_exact * (mpmath.mpf(x.hi) + mpmath.mpf(x.lo))
        return float(abs(p - mpmath.nint(p)))


def test_frac_dist_examples():
    assert dioph.frac_dist(2.0, 1.5) == 0.0
    assert dioph.frac_dist(math.sqrt(2), 1.0) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert dioph.frac_dist(math.pi, 0.0) == 0.0
    with pytest.raises(PrecisionLossError):
        dioph.frac_dist(1e8, 1e7)


def test_dirichlet_range():
    assert dioph.dirichlet_range(1, 2, 2) == 24
    assert dioph.dirichlet_range(3, 2, 1) == 1728
    assert dioph.dirichlet_range(2, 3, 10) == 3240
    with pytest.raises(RangeOverflowError):
        dioph.dirichlet_range(400, 16, 1e3)
    with pytest.raises(InvalidArgument):
        dioph.dirichlet_range(0, 2, 1)


def test_target_validation():
    with pytest.raises(InvalidArgument):
        dioph.ApproxTarget.for_lemma([], 2, 2)
    with pytest.raises(InvalidArgument):
        dioph.ApproxTarget.for_lemma([1.0, 1.0], 2, 2)
    with pytest.raises(InvalidArgument):
        dioph.ApproxTarget.for_lemma([1.0], 1, 2)
    with pytest.raises(InvalidArgument):
        dioph.ApproxTarget.for_lemma([-1.0], 2, 2)


def test_scan_trivial_targets():
    sol = dioph.scan_search(dioph.ApproxTarget.for_lemma([2.0], 2, 2.0))
    assert float(sol.x0) == 2.0 and sol.certified
    sol = dioph.scan_search(dioph.ApproxTarget.for_lemma([two_sqrt(1), two_sqrt(4)], 2, 2.0))
    assert float(sol.x0) == 2.0 and sol.achieved == 0.0


def test_scan_two_square_roots():
    t = dioph.ApproxTarget.for_lemma([two_sqrt(2), two_sqrt(3)], 2, 2.0)
    sol = dioph.scan_search(t)
    assert sol.certified and 2.0 <= float(sol.x0) <= 12 ** 2 * 2
    for n in (2, 3):
        assert mp_dist(2 * mpmath.sqrt(n), sol.x0) <= 1 / 12 + 1e-12


def test_scan_step_precondition():
    t = dioph.ApproxTarget.for_lemma([2.0], 2, 2.0)
    with pytest.raises(InvalidArgument):
        dioph.scan_search(t, step=0.1)


def test_budget_exceeded_reports_count_and_best():
    t = dioph.ApproxTarget.for_lemma([two_sqrt(n) for n in (2, 3, 5, 7, 11)], 4, 3.0)
    with pytest.raises(BudgetExceeded) as info:
        dioph.scan_search(t, budget=10_000)
    assert info.value.count > 10_000
    assert info.value.best is not None and not info.value.best.certified


def test_reducer_examples():
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert lll_reduce(eye) == eye
    rng = np.random.default_rng(4)
    for _ in range(10):
        b = rng.integers(-50, 50, (4, 4)).tolist()
        if gram_determinant(b) == 0:
            continue
        red = lll_reduce(b)
        assert gram_determinant(red) == gram_determinant(b)
        # Lovasz condition with delta = 3/4 on exact Gram-Schmidt data
        gs, mu = [], {}
        for i, v in enumerate(red):
            w = [Fraction(c) for c in v]
            for j, u in enumerate(gs):
                mu[i, j] = sum(Fraction(a) * c for a, c in zip(v, u)) / sum(c * c for c in u)
                w = [a - mu[i, j] * c for a, c in zip(w, u)]
            gs.append(w)
        norms = [sum(c * c for c in w) for w in gs]
        for i in range(1, len(red)):
            assert norms[i] >= (Fraction(3, 4) - mu[i, i - 1] ** 2) * norms[i - 1]
            assert all(abs(mu[i, j]) <= Fraction(1, 2) for j in range(i))


def test_lattice_and_scan_agree_on_feasibility():
    t = dioph.ApproxTarget.for_lemma([two_sqrt(2), two_sqrt(3), two_sqrt(5)], 3, 2.0)
    a, b = dioph.scan_search(t), dioph.lattice_search(t)
    for sol in (a, b):
        assert sol.certified and sol.achieved <= 1 / 18
        for n in (2, 3, 5):
            assert mp_dist(2 * mpmath.sqrt(n), sol.x0) <= 1 / 18 + 1e-12


def test_lattice_too_many_frequencies():
    with pytest.raises(InvalidArgument):
        dioph.lattice_search(dioph.ApproxTarget.for_lemma(
            [two_sqrt(n) for n in range(2, 16)], 2, 2.0))


def test_pigeonhole_completeness_and_soundness():
    rng = np.random.default_rng(21)
    checked = 0
    for _ in range(50):
        M = int(rng.integers(1, 4))
        L = int(rng.integers(2, 4))
        ns = sorted(int(v) for v in rng.choice(np.arange(2, 400), M, replace=False))
        X = float(rng.uniform(2, 20))
        t = dioph.ApproxTarget.for_lemma([two_sqrt(n) for n in ns], L, X)
        sol = dioph.scan_search(t)
        assert sol.certified and sol.in_range
        assert X <= float(sol.x0) <= dioph.dirichlet_range(M, L, X) * (1 + 1e-12)
        for n in ns:
            assert mp_dist(2 * mpmath.sqrt(n), sol.x0) <= t.quality + 1e-12
        checked += 1
        try:
            other = dioph.lattice_search(t)
        except ApproxNotFound:
            continue
        for n in ns:
            assert mp_dist(2 * mpmath.sqrt(n), other.x0) <= t.quality + 1e-12
        checked += 1
    assert checked >= 100


def test_solution_json():
    sol = dioph.scan_search(dioph.ApproxTarget.for_lemma([2.0], 2, 2.0))
    out = sol.to_json()
    assert set(out) >= {"x0", "achieved", "certified", "method", "evaluations"}
