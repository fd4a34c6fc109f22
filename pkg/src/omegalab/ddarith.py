"""Vectorised double-double arithmetic.

A value is carried as an unevaluated sum ``hi + lo`` of two float64 numbers
with ``|lo| <= ulp(hi)/2``, giving roughly 106 significant bits.  Only the
handful of operations needed for phase reduction are provided.  All
functions accept numpy arrays or Python floats and broadcast.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


class DD(NamedTuple):
    hi: float
    lo: float = 0.0

    def __float__(self):
        return float(self.hi + self.lo)


def two_sum(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    s = a + b
    e = b - (s - a)
    return s, e


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_div(ah, al, b):
    """(ah + al) / b for a float64 divisor ``b``."""
    q = ah / b
    p, e = two_prod(q, b)
    r = ((ah - p) - e + al) / b
    return quick_two_sum(q, r)


def dd_sqrt(ah, al=0.0):
    h = np.sqrt(ah)
    p, e = two_prod(h, h)
    r = ((ah - p) - e + al) / (2.0 * h)
    return quick_two_sum(h, r)


def dd_root(a, k: int):
    """k-th root of a non-negative float64 ``a`` via one Newton correction."""
    a = np.asarray(a, dtype=np.float64)
    if k == 1:
        return a.copy(), np.zeros_like(a)
    if k == 2:
        return dd_sqrt(a)
    h = np.power(a, 1.0 / k)
    ph, pl = h, np.zeros_like(h)
    for _ in range(k - 1):
        ph, pl = dd_mul(ph, pl, h, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = ((a - ph) - pl) / (k * np.power(h, k - 1))
    corr = np.where(h > 0, corr, 0.0)
    return quick_two_sum(h, corr)


def dd_frac(hi, lo):
    """Reduce ``hi + lo`` modulo 1 into [-1/2, 1/2]; returns a dd pair."""
    n = np.round(hi)
    s, e = two_sum(hi - n, lo)
    n2 = np.round(s)
    return quick_two_sum(s - n2, e)


def frac_centered(hi, lo):
    h, l = dd_frac(hi, lo)
    return h + l
