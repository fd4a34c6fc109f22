"""Error terms Delta(x), P(x), Delta_k(x): summatory function minus main term."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import mpmath

from . import arith
from .arith import SieveTable
from .errors import InvalidArgument, OutOfRange


@dataclass(frozen=True)
class ErrKind:
    tag: str
    k: int | None = None

    def __post_init__(self):
        if self.tag not in ("divisor", "circle", "piltz"):
            raise InvalidArgument(f"unknown error-term kind {self.tag!r}")
        if self.tag == "piltz":
            if self.k is None or not 2 <= self.k <= arith.MAX_K:
                raise InvalidArgument("piltz kind needs 2 <= k <= 10")
        elif self.k is not None:
            raise InvalidArgument(f"{self.tag} kind takes no k")

    @classmethod
    def parse(cls, text: str) -> "ErrKind":
        """Accepts ``divisor``, ``circle`` or ``piltz:k``."""
        if text.startswith("piltz"):
            _, _, k = text.partition(":")
            if not k:
                raise InvalidArgument("piltz kind must be written piltz:k")
            return cls("piltz", int(k))
        return cls(text)

    @property
    def order(self) -> int:
        """The k of the underlying divisor problem (2 for the circle problem too)."""
        return self.k if self.tag == "piltz" else 2

    @property
    def norm_exponent(self) -> float:
        k = self.order
        return (k - 1) / (2 * k)

    def __str__(self):
        return f"piltz:{self.k}" if self.tag == "piltz" else self.tag


DIVISOR = ErrKind("divisor")
CIRCLE = ErrKind("circle")


def error_term(kind: ErrKind, table: SieveTable, x: float) -> float:
    if x < 1:
        raise InvalidArgument("error terms are evaluated for x >= 1")
    if kind.tag == "circle":
        return arith.summatory(table, "r", x) - math.pi * x
    # divisor is piltz with k = 2, evaluated along the identical path
    k = kind.order
    which = "d" if k == 2 else "d_k"
    return arith.summatory(table, which, x, k=k) - arith.main_term(k, x)


def exact_error(kind: ErrKind, y: float) -> float:
    """Error term at ``y`` from O(sqrt y) lattice counts, without a sieve.

    The main term is formed at 40 digits so the result stays exact to
    float precision well past y = 1e16.
    """
    if kind.tag == "piltz" and kind.k != 2:
        raise OutOfRange(f"no sieve-free route for {kind}")
    if y < 1:
        raise InvalidArgument("error terms are evaluated for x >= 1")
    n = math.floor(y)
    with mpmath.workdps(40):
        yy = mpmath.mpf(y)
        if kind.tag == "circle":
            return float(arith.circle_count(n) - mpmath.pi * yy)
        return float(arith.divisor_summatory_hyperbola(n) - arith.main_term_mp(2, yy))


def error_profile(kind: ErrKind, table: SieveTable, xs: Iterable[float]) -> list:
    """(x, error, error * x^-e) with e = 1/4 for divisor/circle, (k-1)/(2k) for piltz."""
    e = kind.norm_exponent
    out = []
    for x in xs:
        v = error_term(kind, table, x)
        out.append((x, v, v * x ** (-e)))
    return out
