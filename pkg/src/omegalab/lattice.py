"""Integral LLL reduction (exact integer Gram-Schmidt data, Cohen's variant).

Rows of the input are the basis vectors.  All arithmetic is on Python
integers, so reduction is exact however large the entries are.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import ReductionError

MAX_SWAPS = 10**6


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b for b > 0."""
    return (2 * a + b) // (2 * b)


def lll_reduce(basis, delta: Fraction = Fraction(3, 4), max_swaps: int = MAX_SWAPS):
    """Return an LLL-reduced basis (list of lists) spanning the same lattice."""
    b = [None] + [[int(v) for v in row] for row in basis]
    n = len(b) - 1
    if n <= 1:
        return [row[:] for row in b[1:]]
    p, q = delta.numerator, delta.denominator
    d = [0] * (n + 1)
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    d[0] = 1
    d[1] = _dot(b[1], b[1])
    if d[1] == 0:
        raise ReductionError("basis vectors are linearly dependent")
    k, kmax, swaps = 2, 1, 0

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l]:
            r = _round_div(lam[k][l], d[l])
            b[k] = [x - r * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= r * d[l]
            for i in range(1, l):
                lam[k][i] -= r * lam[l][i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        B = (d[k - 2] * d[k] + lk * lk) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lk * t) // d[k - 1]
            lam[i][k - 1] = (B * t + lk * lam[i][k]) // d[k]
        d[k - 1] = B

    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(b[k], b[j])
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise ReductionError("basis vectors are linearly dependent")
                    d[k] = u
        red(k, k - 1)
        if q * d[k] * d[k - 2] < p * d[k - 1] ** 2 - q * lam[k][k - 1] ** 2:
            swap(k)
            swaps += 1
            if swaps > max_swaps:
                raise ReductionError(f"no convergence within {max_swaps} swaps")
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
    return [row[:] for row in b[1:]]


def gram_determinant(basis) -> int:
    """det(B B^T) by fraction-free Gaussian elimination (Bareiss)."""
    rows = [[int(v) for v in r] for r in basis]
    n = len(rows)
    g = [[_dot(rows[i], rows[j]) for j in range(n)] for i in range(n)]
    sign, prev = 1, 1
    for k in range(n - 1):
        if g[k][k] == 0:
            for i in range(k + 1, n):
                if g[i][k] != 0:
                    g[k], g[i] = g[i], g[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                g[i][j] = (g[i][j] * g[k][k] - g[i][k] * g[k][j]) // prev
        prev = g[k][k]
    return sign * g[n - 1][n - 1]
