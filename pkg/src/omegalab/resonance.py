"""Resonance sets (integers with a prescribed number of distinct prime
factors), their cardinality heuristics, the sum S(M) of the M largest
d(n) n^-3/4, and the exponent optimisation behind the choice of lambda.

Throughout, ``loglog`` is the iterated logarithm log(log N), never log base 2.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .arith import SieveTable
from .errors import (DegenerateParameters, DegenerateSetWarning, InvalidArgument,
                     LimitTooSmallError, OutOfRange)


@dataclass(frozen=True)
class ResonanceSet:
    N: float
    lambda_param: float
    r: int
    members: np.ndarray
    mod4_restricted: bool
    interval: tuple
    interval_kind: str

    def __len__(self):
        return len(self.members)

    @property
    def degenerate(self) -> bool:
        return len(self.members) == 0

    def summary(self, table: SieveTable) -> dict:
        vals = _weights(table, self.interval_kind, self.mod4_restricted)
        m = self.members
        return {
            "N": self.N, "lambda": self.lambda_param, "r": self.r,
            "interval": list(self.interval), "mod4": self.mod4_restricted,
            "count": len(m),
            "first": [int(v) for v in m[:5]], "last": [int(v) for v in m[-5:]],
            "min_weight": int(vals[m].min()) if len(m) else None,
        }


def interval_for(N: float, interval_kind: str) -> tuple:
    if interval_kind == "divisor-circle":
        return N / 4, 9 * N / 4
    if interval_kind.startswith("piltz:"):
        k = int(interval_kind.split(":")[1])
        return N / 2 ** k, 1.5 ** k * N
    raise InvalidArgument(f"unknown interval kind {interval_kind!r}")


def _weights(table: SieveTable, interval_kind: str, mod4: bool) -> np.ndarray:
    if interval_kind.startswith("piltz:"):
        return table.values("d_k", int(interval_kind.split(":")[1]))
    return table.r if mod4 else table.d


def build_set(table: SieveTable, N: float, lambda_param: float,
              interval_kind: str = "divisor-circle", mod4: bool = False,
              cap: int | None = None, r: int | None = None) -> ResonanceSet:
    """Integers m in the interval with omega(m) = floor(lambda loglog N).

    ``r`` overrides the prime-factor count directly.  If more than ``cap``
    integers qualify, the ``cap`` with the largest weight d(m) (r(m) when
    ``mod4``, d_k(m) for piltz) are kept, ties going to the smaller m.
    """
    if N < 16:
        raise InvalidArgument("N must be >= 16 so that log log N >= 1")
    lo, hi = interval_for(N, interval_kind)
    if hi > table.limit:
        raise OutOfRange(f"interval top {hi:g} beyond sieve limit {table.limit}",
                         needed_limit=math.floor(hi))
    if r is None:
        r = math.floor(lambda_param * math.log(math.log(N)))
    if r < 1:
        raise DegenerateParameters(f"prime-factor count r={r} < 1")
    a, b = math.ceil(lo), math.floor(hi)
    m = np.arange(a, b + 1)
    mask = table.omega[a:b + 1] == r
    if mod4:
        mask &= table.all_p1mod4[a:b + 1]
    m = m[mask]
    if cap is not None and len(m) > cap:
        w = _weights(table, interval_kind, mod4)[m]
        order = np.lexsort((m, -w.astype(np.int64)))
        m = np.sort(m[order[:cap]])
    if len(m) == 0:
        warnings.warn(DegenerateSetWarning(
            f"no integer in [{lo:g}, {hi:g}] has exactly {r} prime factors"
            + (" all = 1 mod 4" if mod4 else "")), stacklevel=2)
    m.flags.writeable = False
    return ResonanceSet(float(N), float(lambda_param), int(r), m, bool(mod4),
                        (float(lo), float(hi)), interval_kind)


def cardinality_exponent(lambda_param: float, mod4: bool = False) -> float:
    t = lambda_param
    e = t - 1 - t * math.log(t)
    return e - t * math.log(2) if mod4 else e


def cardinality_estimate(N: float, lambda_param: float, mod4: bool = False) -> float:
    """N / sqrt(loglog N) * (log N)^(lambda - 1 - lambda log lambda [- lambda log 2]).

    A point estimate with implied constant 1, for planning only.
    """
    if N < 16:
        raise InvalidArgument("N must be >= 16")
    ll = math.log(math.log(N))
    return N / math.sqrt(ll) * math.log(N) ** cardinality_exponent(lambda_param, mod4)


def landau_estimate(N: float, r: int) -> float:
    """(2N / log N) (loglog N)^(r-1) / (r-1)!: Landau's count over [N/4, 9N/4]."""
    return 2 * N / math.log(N) * math.log(math.log(N)) ** (r - 1) / math.factorial(r - 1)


def _top_values(vals: np.ndarray, M: int) -> np.ndarray:
    part = np.partition(vals, len(vals) - M)[len(vals) - M:]
    return np.sort(part)[::-1]


def s_of_m(table: SieveTable, M: int, limit: int) -> float:
    """Sum of the M largest values of d(n) n^-3/4 over n <= limit."""
    if M < 1:
        raise InvalidArgument("M must be >= 1")
    if limit > table.limit:
        raise OutOfRange(f"limit {limit} beyond sieve limit {table.limit}", needed_limit=limit)
    half = limit // 2
    if half < M:
        raise LimitTooSmallError(f"limit {limit} too small for M={M}", required_limit=4 * M)
    n = np.arange(1, limit + 1, dtype=np.float64)
    vals = table.d[1:limit + 1] * n ** -0.75
    top = _top_values(vals, M)
    if _top_values(vals[:half], M)[-1] != top[-1]:
        raise LimitTooSmallError(
            f"M-th largest value changes between n <= {half} and n <= {limit}; "
            f"grow the limit to at least {2 * limit}", required_limit=2 * limit)
    return float(np.sum(top))


# ---------------------------------------------------------------------------
# exponent of loglog X in the resulting lower bound, as a function of lambda

def exponent_divisor(t: float) -> float:
    return t * math.log(2) + 0.75 * (t - 1 - t * math.log(t))


def exponent_circle(t: float) -> float:
    return t * math.log(2) / 4 + 0.75 * (t - 1 - t * math.log(t))


def exponent_piltz(t: float, k: int) -> float:
    return (k + 1) / (2 * k) * (t - 1 - t * math.log(t)) + t * math.log(k)


def exponent_function(case: str):
    if case == "divisor":
        return exponent_divisor
    if case == "circle":
        return exponent_circle
    if case.startswith("piltz:"):
        k = int(case.split(":")[1])
        return lambda t: exponent_piltz(t, k)
    raise InvalidArgument(f"unknown case {case!r}")


def optimal_lambda(case: str) -> float:
    if case == "divisor":
        return 2 ** (4 / 3)
    if case == "circle":
        return 2 ** (1 / 3)
    if case.startswith("piltz:"):
        k = int(case.split(":")[1])
        if k < 2:
            raise InvalidArgument("piltz needs k >= 2")
        return k ** (2 * k / (k + 1))
    raise InvalidArgument(f"unknown case {case!r}")


def optimal_exponent(case: str) -> float:
    """Closed form of the maximum: 3/4 (2^(4/3) - 1), 3/4 (2^(1/3) - 1), (k+1)/(2k) (k^(2k/(k+1)) - 1)."""
    if case == "divisor":
        return 0.75 * (2 ** (4 / 3) - 1)
    if case == "circle":
        return 0.75 * (2 ** (1 / 3) - 1)
    k = int(case.split(":")[1])
    return (k + 1) / (2 * k) * (k ** (2 * k / (k + 1)) - 1)


def numeric_argmax(g, lo: float, hi: float, tol: float = 1e-12, h: float = 1e-5) -> float:
    """Maximiser of a smooth unimodal g on [lo, hi].

    Bisects on the sign of the central-difference slope; comparing g values
    directly would stall near sqrt(eps) where the maximum is flat.
    """
    def slope(t):
        return g(t + h) - g(t - h)

    a, b = lo, hi
    while b - a > tol * max(1.0, abs(a)):
        m = (a + b) / 2
        if slope(m) > 0:
            a = m
        else:
            b = m
    return (a + b) / 2


def previous_exponent(case: str) -> float:
    """Exponent of loglog X in the earlier omega bounds, for comparison:
    (3 + 2 log 2)/4 for the divisor problem, (log 2)/4 for the circle problem."""
    if case == "divisor":
        return (3 + 2 * math.log(2)) / 4
    if case == "circle":
        return math.log(2) / 4
    raise InvalidArgument(f"no comparison exponent for {case!r}")
