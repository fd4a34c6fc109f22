"""Fejer kernel, its triangle transform, and the smoothed sums F1, F2."""
from __future__ import annotations

import math

import numpy as np

from .ddarith import two_prod, frac_centered
from .errors import InvalidArgument
from .series import ResonanceSeries, eval_weighted


def fejer_K(u):
    """(sin(pi u) / (pi u))^2 with K(0) = 1."""
    u = np.asarray(u, dtype=np.float64)
    out = np.ones_like(u)
    nz = u != 0
    pu = math.pi * u[nz]
    out[nz] = (np.sin(pu) / pu) ** 2
    return out if out.ndim else float(out)


def tri_k(y):
    y = np.asarray(y, dtype=np.float64)
    out = np.maximum(0.0, 1.0 - np.abs(y))
    return out if out.ndim else float(out)


def _anchor(series: ResonanceSeries, N_index: int) -> float:
    if not 1 <= N_index <= len(series):
        raise InvalidArgument(f"N_index {N_index} outside series support 1..{len(series)}")
    lam_N = float(series.lam_hi[N_index - 1] + series.lam_lo[N_index - 1])
    if lam_N <= 0:
        raise InvalidArgument("lambda_N must be positive")
    return lam_N


def F1_weights(series: ResonanceSeries, N_index: int) -> np.ndarray:
    lam_N = _anchor(series, N_index)
    return 0.5 * series.f * tri_k((lam_N - series.lambdas) / lam_N)


def F2_weights(series: ResonanceSeries, N_index: int) -> np.ndarray:
    lam_N = _anchor(series, N_index)
    return series.f * tri_k(series.lambdas / (2 * lam_N))


def F1(series: ResonanceSeries, N_index: int, x) -> float:
    """1/2 sum f(n) cos(2 pi lambda_n x) k((lambda_N - lambda_n)/lambda_N)."""
    return eval_weighted(series, F1_weights(series, N_index), x)


def F2(series: ResonanceSeries, N_index: int, x) -> float:
    """sum f(n) cos(2 pi lambda_n x) k(lambda_n / (2 lambda_N))."""
    return eval_weighted(series, F2_weights(series, N_index), x)


def fejer_average(lam, x0, L):
    """sum_{l=-L}^{L} k(l/L) cos(2 pi l lam x0), by direct summation.

    Broadcasts over array arguments.  The product lam * x0 is reduced mod 1
    exactly (two_prod) before the sum.
    """
    lam, x0, L = np.broadcast_arrays(np.asarray(lam, dtype=np.float64),
                                     np.asarray(x0, dtype=np.float64),
                                     np.asarray(L))
    if np.any(L < 1):
        raise InvalidArgument("L must be >= 1")
    t = frac_centered(*two_prod(lam, x0))
    total = np.ones(t.shape)
    for ell in range(1, int(L.max()) + 1):
        w = np.where(ell <= L, 1.0 - ell / L, 0.0)
        total = total + 2.0 * w * np.cos(2 * math.pi * ell * t)
    return total if total.ndim else float(total)
