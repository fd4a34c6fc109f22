"""Finite trigonometric series F(x) = sum f(n) cos(2 pi lambda_n x + beta) and
the Voronoi-type truncations of the divisor, circle and Piltz error terms.

Frequencies are stored as double-double pairs and each phase lambda_n * x
is reduced modulo 1 in double-double before the cosine is taken, so the
phase error stays near 1e-16 even when lambda_n * x is 1e12.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import arith
from .arith import SieveTable
from .ddarith import DD, dd_add, dd_mul, dd_root, dd_sqrt, frac_centered, two_prod
from .errors import InvalidArgument, OutOfRange, TruncationWarning

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ResonanceSeries:
    """Coefficients f(n) and frequencies lambda_n for n = 1..len, phase beta.

    Position ``i`` of every array holds index ``n = i + 1``.
    """

    f: np.ndarray
    lam_hi: np.ndarray
    lam_lo: np.ndarray
    beta: float

    def __post_init__(self):
        if np.any(self.f < 0):
            raise InvalidArgument("coefficients must be non-negative")
        lam = self.lam_hi + self.lam_lo
        if np.any(lam < 0) or np.any(np.diff(lam) < 0):
            raise InvalidArgument("frequencies must be non-negative and non-decreasing")
        for a in (self.f, self.lam_hi, self.lam_lo):
            a.flags.writeable = False

    def __len__(self):
        return len(self.f)

    @property
    def lambdas(self) -> np.ndarray:
        return self.lam_hi + self.lam_lo

    def lam(self, n: int) -> DD:
        return DD(float(self.lam_hi[n - 1]), float(self.lam_lo[n - 1]))

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.f)[0]

    @property
    def total(self) -> float:
        return float(np.sum(self.f))


def make_series(f, lambdas, beta: float = 0.0) -> ResonanceSeries:
    """Series from plain arrays; ``lambdas`` may be floats or a (hi, lo) pair."""
    f = np.array(f, dtype=np.float64)
    if isinstance(lambdas, tuple) and len(lambdas) == 2:
        hi, lo = (np.array(a, dtype=np.float64) for a in lambdas)
    else:
        hi = np.array(lambdas, dtype=np.float64)
        lo = np.zeros_like(hi)
    if hi.shape != f.shape:
        raise InvalidArgument("f and lambdas differ in length")
    return ResonanceSeries(f, hi, lo, float(beta))


def as_dd(x) -> DD:
    if isinstance(x, DD):
        return x
    if isinstance(x, tuple):
        return DD(float(x[0]), float(x[1]))
    return DD(float(x), 0.0)


def phase_frac(lam_hi, lam_lo, x) -> np.ndarray:
    """lambda * x reduced into [-1/2, 1/2] in double-double."""
    x = as_dd(x)
    ph, pl = dd_mul(lam_hi, lam_lo, x.hi, x.lo)
    return frac_centered(ph, pl)


def eval_F(series: ResonanceSeries, x, precision: str = "dd") -> float:
    idx = series.support
    if precision == "dd":
        t = phase_frac(series.lam_hi[idx], series.lam_lo[idx], x)
    elif precision == "double":
        t = series.lam_hi[idx] * float(as_dd(x).hi + as_dd(x).lo)
    else:
        raise InvalidArgument(f"unknown precision mode {precision!r}")
    return float(np.sum(series.f[idx] * np.cos(TWO_PI * t + series.beta)))


def eval_weighted(series: ResonanceSeries, weights: np.ndarray, x, beta: float = 0.0) -> float:
    """sum_n weights[n] cos(2 pi lambda_n x + beta) over the nonzero weights."""
    idx = np.nonzero(weights)[0]
    t = phase_frac(series.lam_hi[idx], series.lam_lo[idx], x)
    return float(np.sum(weights[idx] * np.cos(TWO_PI * t + beta)))


def eval_F_grid(series: ResonanceSeries, x_start, h: float, count: int,
                block: int = 1024) -> np.ndarray:
    """F at x_start + j*h for j = 0..count-1.

    Each block of points starts from a double-double phase and then rotates
    by exact powers exp(2 pi i lambda_n b h), b < block, so every value is a
    product of two independently accurate unit complex numbers.
    """
    idx = series.support
    lh, ll = series.lam_hi[idx], series.lam_lo[idx]
    coef = series.f[idx] * np.exp(1j * series.beta)
    b = np.arange(min(block, count), dtype=np.float64)
    step_ph = frac_centered(*dd_mul(lh, ll, h, 0.0))
    rot_phase = np.outer(step_ph, b)
    rot_phase -= np.round(rot_phase)
    rot = np.exp(1j * TWO_PI * rot_phase)
    x0 = as_dd(x_start)
    out = np.empty(count)
    for j0 in range(0, count, block):
        jh, jl = two_prod(float(j0), h)
        xh, xl = dd_add(x0.hi, x0.lo, jh, jl)
        start = coef * np.exp(1j * TWO_PI * phase_frac(lh, ll, DD(xh, xl)))
        m = min(block, count - j0)
        out[j0:j0 + m] = (start @ rot[:, :m]).real
    return out


# ---------------------------------------------------------------------------
# Voronoi truncations

def _check_cutoff(table: SieveTable, cutoff: int):
    if cutoff < 1:
        raise InvalidArgument("cutoff must be >= 1")
    if cutoff > table.limit:
        raise OutOfRange(f"cutoff {cutoff} beyond sieve limit {table.limit}",
                         needed_limit=cutoff)


def divisor_series(table: SieveTable, cutoff: int) -> ResonanceSeries:
    """f(n) = d(n) n^-3/4, lambda_n = 2 sqrt(n), beta = -pi/4."""
    _check_cutoff(table, cutoff)
    n = np.arange(1, cutoff + 1, dtype=np.float64)
    hi, lo = dd_sqrt(n)
    f = table.d[1:cutoff + 1] * n ** -0.75
    return ResonanceSeries(f, 2.0 * hi, 2.0 * lo, -math.pi / 4)


def circle_series(table: SieveTable, cutoff: int) -> ResonanceSeries:
    """f(n) = r(n) n^-3/4, lambda_n = sqrt(n), beta = pi/4."""
    _check_cutoff(table, cutoff)
    n = np.arange(1, cutoff + 1, dtype=np.float64)
    hi, lo = dd_sqrt(n)
    f = table.r[1:cutoff + 1] * n ** -0.75
    return ResonanceSeries(f, hi, lo, math.pi / 4)


def _sqrt_dd(y: float) -> DD:
    h, l = dd_sqrt(np.float64(y))
    return DD(float(h), float(l))


# Residues at s = 0 that the oscillatory sums omit: zeta(0)^2 for the divisor
# problem, and -1 for the circle problem because r(0) = 1 is left out of P.
DELTA_CONSTANT = 0.25
P_CONSTANT = -1.0


def approx_delta(table: SieveTable, cutoff: int, y: float,
                 series: ResonanceSeries | None = None, constant: bool = True) -> float:
    """Truncated Voronoi sum for Delta(y), via x = sqrt(y).

    With ``constant=False`` the bare oscillatory part is returned.
    """
    if y < 4:
        raise InvalidArgument("approx_delta needs y >= 4")
    s = divisor_series(table, cutoff) if series is None else series
    x = _sqrt_dd(y)
    osc = math.sqrt(float(x)) / (math.pi * math.sqrt(2)) * eval_F(s, x)
    return osc + DELTA_CONSTANT if constant else osc


def approx_P(table: SieveTable, cutoff: int, y: float,
             series: ResonanceSeries | None = None, constant: bool = True) -> float:
    """Truncated series for P(y); the minus sign lives here, not in f."""
    if y < 4:
        raise InvalidArgument("approx_P needs y >= 4")
    s = circle_series(table, cutoff) if series is None else series
    x = _sqrt_dd(y)
    osc = -math.sqrt(float(x)) / math.pi * eval_F(s, x)
    return osc + P_CONSTANT if constant else osc


# ---------------------------------------------------------------------------
# Gaussian-smoothed Piltz identity

def piltz_beta(k: int) -> float:
    return (k - 3) * math.pi / 4


def _piltz_gauss(n, k, N):
    return np.exp(-math.pi ** 2 * (np.asarray(n, dtype=np.float64) / N) ** (2.0 / k))


def piltz_tail_bound(k: int, N: float, cutoff: int) -> float:
    """Crude bound on sum_{n > cutoff} f(n) using d_k(n) <= (2 sqrt n)^(k-1)."""
    n = np.arange(cutoff + 1, cutoff + 1 + max(64, int(4 * N * 40 ** (k / 2))), dtype=np.float64)
    terms = (2 * np.sqrt(n)) ** (k - 1) * n ** (-(k + 1) / (2 * k)) * _piltz_gauss(n, k, N)
    return float(np.sum(terms))


def piltz_series(table: SieveTable, k: int, N: float, cutoff: int) -> ResonanceSeries:
    """f(n) = d_k(n) n^-(k+1)/(2k) exp(-pi^2 (n/N)^(2/k)), lambda_n = k n^(1/k)."""
    _check_cutoff(table, cutoff)
    vals = table.values("d_k", k)
    if _piltz_gauss(cutoff, k, N) >= 1e-16 * _piltz_gauss(1, k, N):
        tail = piltz_tail_bound(k, N, cutoff)
        warnings.warn(TruncationWarning(
            f"cutoff {cutoff} leaves Gaussian weight above 1e-16 relative; tail <= {tail:.3g}",
            tail), stacklevel=2)
    n = np.arange(1, cutoff + 1, dtype=np.float64)
    hi, lo = dd_root(n, k)
    f = vals[1:cutoff + 1] * n ** (-(k + 1) / (2 * k)) * _piltz_gauss(n, k, N)
    return ResonanceSeries(f, k * hi, k * lo, piltz_beta(k))


def piltz_cutoff(k: int, N: float) -> int:
    """Smallest cutoff making the Gaussian factor < 1e-16 relative to n = 1."""
    # pi^2 ((n/N)^(2/k) - N^(-2/k)) > log(1e16)
    target = math.log(1e16) / math.pi ** 2 + N ** (-2.0 / k)
    return int(math.ceil(N * target ** (k / 2))) + 1


@dataclass(frozen=True)
class QuadConfig:
    order: int = 16
    support: float = 8.0  # in units of N^(-1/k)
    max_piece: float = 0.25  # same units


def gaussian_smooth(k: int, x: float, N: float, fn: Callable[[np.ndarray], np.ndarray],
                    quad: QuadConfig = QuadConfig()) -> float:
    """(N^(1/k)/sqrt(pi)) * integral fn(x^k e^(u/x)) exp(-u^2 N^(2/k)) du.

    The u-axis is split wherever x^k e^(u/x) crosses an integer; ``fn`` may
    jump there and is assumed smooth in between.
    """
    s = N ** (1.0 / k)
    U = quad.support / s
    logc = k * math.log(x)
    y_lo, y_hi = math.exp(logc - U / x), math.exp(logc + U / x)
    ints = np.arange(math.floor(y_lo) + 1, math.floor(y_hi) + 1, dtype=np.float64)
    cuts = x * (np.log(ints) - logc)
    edges = np.concatenate(([-U], cuts[(cuts > -U) & (cuts < U)], [U]))
    hmax = quad.max_piece / s
    pieces = np.maximum(1, np.ceil(np.diff(edges) / hmax)).astype(int)
    width = np.repeat(np.diff(edges) / pieces, pieces)
    sub = np.concatenate([np.arange(p) for p in pieces])
    lo = np.repeat(edges[:-1], pieces) + width * sub
    nodes, weights = np.polynomial.legendre.leggauss(quad.order)
    u = lo[:, None] + width[:, None] * (nodes[None, :] + 1) / 2
    w = width[:, None] / 2 * weights[None, :]
    y = np.exp(logc + u / x)
    g = fn(y) * np.exp(-(u * s) ** 2)
    return float(s / math.sqrt(math.pi) * np.sum(g * w))


def main_term_vec(k: int, y: np.ndarray) -> np.ndarray:
    poly = arith.main_term_poly(k)
    t = np.log(y)
    acc = np.zeros_like(y)
    for c in reversed(poly.coeffs):
        acc = acc * t + c
    return y * acc


def smoothed_lhs(k: int, table: SieveTable, x: float, N: float,
                 quad: QuadConfig = QuadConfig()) -> float:
    """Gaussian average of Delta_k(x^k e^(u/x)) with width N^(-1/k)."""
    U = quad.support / N ** (1.0 / k)
    top = math.exp(k * math.log(x) + U / x)
    if top > table.limit:
        raise OutOfRange(f"smoothing support reaches {top:.1f} > limit {table.limit}",
                         needed_limit=math.ceil(top))
    cum = table.cumulative("d" if k == 2 else "d_k", k)

    def delta_k(y):
        return cum[np.floor(y).astype(np.int64)] - main_term_vec(k, y)

    return gaussian_smooth(k, x, N, delta_k, quad)


def smoothed_rhs(k: int, table: SieveTable, x: float, N: float, cutoff: int | None = None) -> float:
    if cutoff is None:
        cutoff = piltz_cutoff(k, N)
    s = piltz_series(table, k, N, cutoff)
    return x ** ((k - 1) / 2) / (math.pi * math.sqrt(k)) * eval_F(s, x)
