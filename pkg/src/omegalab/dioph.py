"""Simultaneous diophantine approximation: find x0 >= X with
||lambda_m x0|| <= q for every frequency, q = 1/(6L).

Pigeonholing the points jX (0 <= j <= (6L)^M) in the unit cube shows a
solution of the form x0 = jX exists with 1 <= j <= (6L)^M.  The scan grid
is chosen so that X is an exact multiple of the step; every jX is then a
grid point and the scan cannot miss the pigeonhole solution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ddarith import DD, dd_add, dd_div, dd_frac, dd_mul, frac_centered, two_prod
from .errors import (ApproxNotFound, BudgetExceeded, InvalidArgument, PrecisionLossError,
                     RangeOverflowError)
from .lattice import lll_reduce

DEFAULT_BUDGET = 2 * 10**9
CHUNK = 1 << 16
_PRODUCT_LIMIT = 1e14


def _dd(x) -> DD:
    if isinstance(x, DD):
        return x
    if isinstance(x, tuple):
        return DD(float(x[0]), float(x[1]))
    return DD(float(x), 0.0)


def frac_dist(lam, x) -> float:
    """Distance from lam * x to the nearest integer, in double-double."""
    lam, x = _dd(lam), _dd(x)
    ph, pl = dd_mul(lam.hi, lam.lo, x.hi, x.lo)
    if not abs(ph) <= _PRODUCT_LIMIT:
        raise PrecisionLossError(f"lambda*x = {ph:.3g} exceeds {_PRODUCT_LIMIT:.0e}")
    return abs(float(frac_centered(ph, pl)))


def dirichlet_range(M: int, L: int, X: float) -> float:
    """Upper end (6L)^M X of the range guaranteed to contain x0."""
    if M < 1 or L < 2:
        raise InvalidArgument("need M >= 1 and L >= 2")
    try:
        v = float(6 * L) ** M * X
    except OverflowError:
        v = math.inf
    if not math.isfinite(v):
        raise RangeOverflowError(f"(6*{L})^{M} * {X} overflows float64")
    return v


@dataclass(frozen=True)
class ApproxTarget:
    freqs_hi: np.ndarray
    freqs_lo: np.ndarray
    quality: float
    X: float

    def __post_init__(self):
        if len(self.freqs_hi) == 0:
            raise InvalidArgument("need at least one frequency")
        if not 0 < self.quality <= 1 / 12 + 1e-15:
            raise InvalidArgument("quality must lie in (0, 1/12]")
        if np.any(self.freqs_hi <= 0):
            raise InvalidArgument("frequencies must be positive")
        lam = self.freqs_hi + self.freqs_lo
        if len(np.unique(lam)) != len(lam):
            raise InvalidArgument("frequencies must be distinct")

    @classmethod
    def for_lemma(cls, freqs, L: int, X: float) -> "ApproxTarget":
        """Target with quality 1/(6L); ``freqs`` is a list of floats or DD pairs."""
        if L < 2:
            raise InvalidArgument("L must be >= 2")
        pairs = [_dd(f) for f in freqs]
        return cls(np.array([p.hi for p in pairs]), np.array([p.lo for p in pairs]),
                   1.0 / (6 * L), float(X))

    @property
    def M(self) -> int:
        return len(self.freqs_hi)

    @property
    def range_end(self) -> float:
        """X * (1/q)^M, which is (6L)^M X for q = 1/(6L)."""
        try:
            v = (1.0 / self.quality) ** self.M * self.X
        except OverflowError:
            v = math.inf
        return v

    def freq(self, i: int) -> DD:
        return DD(float(self.freqs_hi[i]), float(self.freqs_lo[i]))


@dataclass(frozen=True)
class ApproxSolution:
    """x0 = index * step (step as a double-double), so l * x0 stays exact."""

    index: int
    step: DD
    achieved: float
    method: str
    certified: bool
    in_range: bool
    evaluations: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def x0(self) -> DD:
        return scaled(self.step, self.index)

    def to_json(self) -> dict:
        return {"x0": float(self.x0), "x0_hi": self.x0.hi, "x0_lo": self.x0.lo,
                "achieved": self.achieved, "certified": self.certified,
                "in_range": self.in_range, "method": self.method,
                "evaluations": self.evaluations}


def scaled(step: DD, j: int) -> DD:
    """j * step in double-double (exact up to the final renormalisation)."""
    ph, pl = two_prod(float(j), step.hi)
    h, l = dd_add(ph, pl, float(j) * step.lo, 0.0)
    return DD(float(h), float(l))


def certify(target: ApproxTarget, x: DD) -> float:
    return max(frac_dist(target.freq(i), x) for i in range(target.M))


def default_step(target: ApproxTarget) -> tuple[DD, int]:
    """Step <= q/(4 pi max lambda) dividing X exactly; returns (step, X/step)."""
    lam_max = float(np.max(target.freqs_hi + target.freqs_lo))
    s = max(1, math.ceil(target.X * 4 * math.pi * lam_max / target.quality))
    h, l = dd_div(target.X, 0.0, float(s))
    return DD(float(h), float(l)), s


def scan_search(target: ApproxTarget, step: float | None = None,
                budget: int = DEFAULT_BUDGET) -> ApproxSolution:
    """Smallest grid point x >= X with max_m ||lambda_m x|| <= q.

    Raises ApproxNotFound (with the best near miss) if the Dirichlet range is
    exhausted and BudgetExceeded if the range needs more than ``budget``
    frequency evaluations and none of the first ``budget`` succeeded.
    """
    lam_max = float(np.max(target.freqs_hi + target.freqs_lo))
    if step is None:
        h, j_start = default_step(target)
    else:
        if step > target.quality / (2 * math.pi * lam_max):
            raise InvalidArgument("step exceeds q / (2 pi max lambda)")
        h = DD(float(step), 0.0)
        j_start = math.ceil(target.X / step)
    h_float = h.hi + h.lo
    j_end = math.floor(target.range_end / h_float * (1 + 1e-15))
    M = target.M
    projected = (j_end - j_start + 1) * M
    j_stop = j_end if projected <= budget else j_start + budget // M - 1

    th_hi, th_lo = dd_mul(target.freqs_hi, target.freqs_lo, h.hi, h.lo)
    th_hi, th_lo = dd_frac(th_hi, th_lo)
    th_hi, th_lo = th_hi[:, None], th_lo[:, None]
    best = (math.inf, None)
    evaluated = 0
    for j0 in range(j_start, j_stop + 1, CHUNK):
        j = np.arange(j0, min(j0 + CHUNK, j_stop + 1), dtype=np.float64)[None, :]
        p, e = two_prod(j, th_hi)
        dist = np.abs(frac_centered(p, e + j * th_lo))
        worst = dist.max(axis=0)
        evaluated += worst.size * M
        hits = np.nonzero(worst <= target.quality)[0]
        i_min = int(np.argmin(worst))
        if worst[i_min] < best[0]:
            best = (float(worst[i_min]), j0 + i_min)
        for i in hits:
            idx = j0 + int(i)
            x = scaled(h, idx)
            achieved = certify(target, x)
            if achieved <= target.quality:
                return ApproxSolution(idx, h, achieved, "scan", True, True, evaluated)
    near = None
    if best[1] is not None:
        near = ApproxSolution(best[1], h, best[0], "scan", False, True, evaluated)
    if j_stop < j_end:
        raise BudgetExceeded(
            f"scan needs {projected} evaluations, budget {budget}; none certified",
            projected, near)
    raise ApproxNotFound("no certified point in the Dirichlet range", near,
                         {"evaluations": evaluated, "best_achieved": best[0]})


def _candidate_coeffs(dim: int, bound: int):
    from itertools import product
    span = range(-bound, bound + 1)
    head = min(dim, 4)
    for c in product(span, repeat=head):
        if any(c):
            yield c + (0,) * (dim - head)
    for i in range(head, dim):
        yield tuple(1 if j == i else 0 for j in range(dim))


def lattice_search(target: ApproxTarget, denom_bits: int = 96,
                   coeff_bound: int = 2, weight_shifts=(0, -4, 4, -8, 8)) -> ApproxSolution:
    """Simultaneous approximation by lattice reduction of

        b_0 = (C, a_1 S, ..., a_M S),  b_m = S e_m,

    with a_m = frac(lambda_m X), S = 2^denom_bits and C weighting the size
    of t in x0 = t X.  The quality is tightened by 2^(M/2) before reduction
    and candidates are certified against the original q.
    """
    M = target.M
    if M > 12:
        raise InvalidArgument("lattice search supports at most 12 frequencies")
    S = 1 << denom_bits
    q_int = target.quality / 2 ** (M / 2)
    Q = (1.0 / q_int) ** M
    alpha = []
    for i in range(M):
        lam = target.freq(i)
        ah, al = dd_mul(lam.hi, lam.lo, target.X, 0.0)
        fh, fl = dd_frac(ah, al)
        alpha.append(round((Fraction(float(fh)) + Fraction(float(fl))) * S))
    X = DD(target.X, 0.0)
    q_range = (1.0 / target.quality) ** M
    found = {}
    best_miss = (math.inf, None)
    tried = 0
    for shift in weight_shifts:
        C = max(1, round(S * q_int / Q * 2.0 ** shift))
        basis = [[C] + alpha]
        for i in range(M):
            row = [0] * (M + 1)
            row[i + 1] = S
            basis.append(row)
        red = lll_reduce(basis)
        for coeffs in _candidate_coeffs(M + 1, coeff_bound):
            v0 = sum(c * row[0] for c, row in zip(coeffs, red))
            t = abs(v0) // C
            if t == 0 or t in found:
                continue
            tried += 1
            try:
                achieved = certify(target, scaled(X, t))
            except PrecisionLossError:
                continue
            if achieved <= target.quality:
                found[t] = achieved
            elif achieved < best_miss[0]:
                best_miss = (achieved, t)
    if not found:
        near = None
        if best_miss[1] is not None:
            near = ApproxSolution(best_miss[1], X, best_miss[0], "lattice", False,
                                  best_miss[1] <= q_range, tried)
        raise ApproxNotFound("lattice reduction produced no certified candidate", near,
                             {"candidates": tried, "best_achieved": best_miss[0]})
    in_range = [t for t in found if t <= q_range]
    pool = in_range or list(found)
    t = min(pool, key=lambda s: (found[s], s))
    return ApproxSolution(t, X, found[t], "lattice", True, t <= q_range, tried)
