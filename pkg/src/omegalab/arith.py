"""Arithmetic functions d(n), r(n), d_k(n), omega(n) and their summatory
functions, plus the residue main term of sum_{n<=x} d_k(n).

All tables are 1-indexed numpy arrays of length ``limit + 1`` whose slot 0
holds 0, so ``table.d[12] == 6``.
"""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import mpmath
import numpy as np

from .errors import InvalidArgument, OutOfRange, ResourceLimitError

MAX_K = 10
DEFAULT_MEMORY_CAP = 3 * 2**30
_INT32_MAX = np.iinfo(np.int32).max


@dataclass(frozen=True)
class SieveTable:
    limit: int
    d: np.ndarray
    r: np.ndarray
    dk: Mapping[int, np.ndarray]
    omega: np.ndarray
    all_p1mod4: np.ndarray
    _cumsums: dict = field(default_factory=dict, repr=False, compare=False)

    def values(self, which: str, k: int | None = None) -> np.ndarray:
        if which == "d":
            return self.d
        if which == "r":
            return self.r
        if which == "d_k":
            if k == 2 and 2 not in self.dk:
                return self.d
            if k not in self.dk:
                raise InvalidArgument(f"d_{k} not present in table (have {sorted(self.dk)})")
            return self.dk[k]
        raise InvalidArgument(f"unknown function selector {which!r}")

    def cumulative(self, which: str, k: int | None = None) -> np.ndarray:
        key = (which, k)
        if key not in self._cumsums:
            c = np.cumsum(self.values(which, k), dtype=np.int64)
            c.flags.writeable = False
            self._cumsums[key] = c
        return self._cumsums[key]


def sieve_memory_estimate(limit: int, ks: Sequence[int] = ()) -> int:
    n = limit + 1
    # d, r int32; dk int32 each; omega int8; flags bool; int64 scratch x3
    return n * (4 * 2 + 4 * len(ks) + 1 + 1 + 8 * 3)


def _divisor_counts(limit: int) -> np.ndarray:
    d = np.zeros(limit + 1, dtype=np.int32)
    for i in range(1, math.isqrt(limit) + 1):
        d[i * i] += 1
        d[i * (i + 1)::i] += 2
    return d


def _convolve_with_one(g: np.ndarray, limit: int) -> np.ndarray:
    """h(n) = sum_{ab=n} g(a), summed over divisor pairs up to sqrt."""
    h = np.zeros(limit + 1, dtype=np.int64)
    for i in range(1, math.isqrt(limit) + 1):
        # a = i, b = j >= i
        h[i * i::i] += g[i]
        # b = i, a = j > i
        top = limit // i
        if top > i:
            h[i * (i + 1)::i] += g[i + 1:top + 1]
    return h


def _lattice_counts(limit: int) -> np.ndarray:
    r = np.zeros(limit + 1, dtype=np.int32)
    for a in range(0, math.isqrt(limit) + 1):
        b = np.arange(0, math.isqrt(limit - a * a) + 1, dtype=np.int64)
        w = np.where(b > 0, 2, 1) * (2 if a > 0 else 1)
        r[a * a + b * b] += w.astype(np.int32)
    r[0] = 0
    return r


def _prime_factor_data(limit: int):
    omega = np.zeros(limit + 1, dtype=np.int8)
    p1 = np.ones(limit + 1, dtype=bool)
    rem = np.arange(limit + 1, dtype=np.int64)
    root = math.isqrt(limit)
    is_p = np.ones(root + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, root + 1):
        if not is_p[p]:
            continue
        is_p[p * p::p] = False
        omega[p::p] += 1
        if p % 4 != 1:
            p1[p::p] = False
        pe = p
        while pe <= limit:
            rem[pe::pe] //= p
            pe *= p
    big = rem > 1  # one prime factor above sqrt(limit) remains
    omega[big] += 1
    p1[big & (rem % 4 != 1)] = False
    p1[0] = False
    return omega, p1


def build_sieve(limit: int, ks: Sequence[int] = (), memory_cap: int | None = None) -> SieveTable:
    """Sieve d, r, d_k (k in ``ks``), omega and the all-primes-1-mod-4 flag."""
    if limit < 1:
        raise InvalidArgument("limit must be >= 1")
    ks = sorted(set(int(k) for k in ks))
    for k in ks:
        if not 2 <= k <= MAX_K:
            raise InvalidArgument(f"k={k} outside supported range 2..{MAX_K}")
    cap = DEFAULT_MEMORY_CAP if memory_cap is None else memory_cap
    need = sieve_memory_estimate(limit, ks)
    if need > cap:
        raise ResourceLimitError(
            f"sieve to {limit} needs ~{need} bytes, above memory cap {cap} bytes", cap)

    d = _divisor_counts(limit)
    dk = {}
    prev = np.ones(limit + 1, dtype=np.int64)
    prev[0] = 0
    for k in range(2, max(ks, default=1) + 1):
        prev = _convolve_with_one(prev, limit)
        if k in ks:
            if prev.max() > _INT32_MAX:
                raise OverflowError(f"d_{k} exceeds int32 below {limit}")
            dk[k] = prev.astype(np.int32)
    r = _lattice_counts(limit)
    omega, p1 = _prime_factor_data(limit)
    for a in (d, r, omega, p1, *dk.values()):
        a.flags.writeable = False
    return SieveTable(limit, d, r, dk, omega, p1)


def summatory(table: SieveTable, which: str, x: float, k: int | None = None) -> int:
    """Exact sum of the selected function over 1 <= n <= floor(x)."""
    if x < 0:
        return 0
    n = math.floor(x)
    if n > table.limit:
        raise OutOfRange(f"x={x} beyond sieve limit {table.limit}", needed_limit=n)
    if n == 0:
        return 0
    return int(table.cumulative(which, k)[n])


# ---------------------------------------------------------------------------
# O(sqrt x) exact counts, usable far beyond any sieve

def _isqrt_vec(v: np.ndarray) -> np.ndarray:
    s = np.sqrt(v.astype(np.float64)).astype(np.int64)
    s -= (s * s > v)
    s += ((s + 1) * (s + 1) <= v)
    return s


def divisor_summatory_hyperbola(n: int) -> int:
    """D(n) = 2 * sum_{a <= sqrt n} floor(n/a) - floor(sqrt n)^2."""
    n = int(n)
    if n < 1:
        return 0
    s = math.isqrt(n)
    total = 0
    for start in range(1, s + 1, 1 << 20):
        a = np.arange(start, min(s, start + (1 << 20) - 1) + 1, dtype=np.int64)
        total += int(np.sum(n // a))
    return 2 * total - s * s


def circle_count(n: int) -> int:
    """#{(a, b) in Z^2 : 0 < a^2 + b^2 <= n}."""
    n = int(n)
    if n < 1:
        return 0
    s = math.isqrt(n)
    total = 0
    for start in range(1, s + 1, 1 << 20):
        a = np.arange(start, min(s, start + (1 << 20) - 1) + 1, dtype=np.int64)
        total += int(np.sum(2 * _isqrt_vec(n - a * a) + 1))
    # a = 0 column plus both signs of a != 0
    return (2 * s + 1) + 2 * total - 1


# ---------------------------------------------------------------------------
# main term Res_{s=1} zeta(s)^k x^s / s

@lru_cache(maxsize=1)
def stieltjes_constants() -> tuple:
    raw = json.loads(resources.files("omegalab").joinpath("data/stieltjes.json").read_text())
    return tuple(raw["gamma"])


@dataclass(frozen=True)
class MainTermPoly:
    """x * sum_j coeffs[j] (log x)^j; ``coeffs_mp`` keeps 30-digit values."""

    k: int
    coeffs: tuple
    stieltjes: tuple
    coeffs_mp: tuple = field(repr=False, default=())

    def __call__(self, x: float) -> float:
        t = math.log(x)
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return x * acc


def _series_mul(a, b, deg):
    out = [mpmath.mpf(0)] * (deg + 1)
    for i, ai in enumerate(a[:deg + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[:deg + 1 - i]):
            out[i + j] += ai * bj
    return out


@lru_cache(maxsize=None)
def main_term_poly(k: int) -> MainTermPoly:
    if not 1 <= k <= MAX_K:
        raise InvalidArgument(f"k={k} outside supported range 1..{MAX_K}")
    with mpmath.workdps(40):
        gam = [mpmath.mpf(g) for g in stieltjes_constants()]
        deg = k - 1
        # (s-1) zeta(s) = 1 + sum_n (-1)^n gamma_n / n! (s-1)^{n+1}
        a = [mpmath.mpf(1)] + [
            (-1) ** n * gam[n] / mpmath.factorial(n) for n in range(deg)]
        ak = [mpmath.mpf(1)] + [mpmath.mpf(0)] * deg
        for _ in range(k):
            ak = _series_mul(ak, a, deg)
        inv_s = [mpmath.mpf((-1) ** j) for j in range(deg + 1)]
        c = _series_mul(ak, inv_s, deg)
        coeffs_mp = tuple(c[deg - j] / mpmath.factorial(j) for j in range(k))
    return MainTermPoly(
        k=k,
        coeffs=tuple(float(v) for v in coeffs_mp),
        stieltjes=tuple(float(g) for g in gam[:k + 1]),
        coeffs_mp=coeffs_mp,
    )


def main_term(k: int, x: float) -> float:
    if x < 1:
        raise InvalidArgument("main term defined for x >= 1")
    return main_term_poly(k)(x)


def main_term_mp(k: int, x) -> mpmath.mpf:
    """Main term at 30+ digits, for arguments where float64 cancels badly."""
    poly = main_term_poly(k)
    with mpmath.workdps(40):
        x = mpmath.mpf(x)
        t = mpmath.log(x)
        acc = mpmath.mpf(0)
        for c in reversed(poly.coeffs_mp):
            acc = acc * t + c
        return x * acc


# ---------------------------------------------------------------------------
# binary cache: magic, version, limit, function list, little-endian arrays

_MAGIC = b"OMEGASV1"
_VERSION = 1
_DTYPES = {"i4": np.dtype("<i4"), "i1": np.dtype("<i1"), "b1": np.dtype("|b1")}


def _table_arrays(table: SieveTable):
    yield "d", "i4", table.d
    yield "r", "i4", table.r
    for k, arr in sorted(table.dk.items()):
        yield f"d{k}", "i4", arr
    yield "omega", "i1", table.omega
    yield "p1mod4", "b1", table.all_p1mod4


def save_sieve(table: SieveTable, path) -> None:
    entries = list(_table_arrays(table))
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IQI", _VERSION, table.limit, len(entries)))
        for name, code, _ in entries:
            fh.write(struct.pack("<16s2s", name.encode(), code.encode()))
        for _, code, arr in entries:
            fh.write(np.ascontiguousarray(arr, dtype=_DTYPES[code]).tobytes())


def load_sieve(path) -> SieveTable:
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise InvalidArgument(f"{path}: not a sieve cache file")
        version, limit, count = struct.unpack("<IQI", fh.read(16))
        if version != _VERSION:
            raise InvalidArgument(f"{path}: unsupported cache version {version}")
        heads = []
        for _ in range(count):
            name, code = struct.unpack("<16s2s", fh.read(18))
            heads.append((name.rstrip(b"\0").decode(), code.decode()))
        arrays = {}
        for name, code in heads:
            dt = _DTYPES[code]
            buf = fh.read(dt.itemsize * (limit + 1))
            arr = np.frombuffer(buf, dtype=dt).astype(dt.newbyteorder("="))
            arr.flags.writeable = False
            arrays[name] = arr
    dk = {int(n[1:]): a for n, a in arrays.items() if n[0] == "d" and n[1:].isdigit()}
    return SieveTable(limit, arrays["d"], arrays["r"], dk, arrays["omega"], arrays["p1mod4"])


def cached_sieve(limit: int, ks: Sequence[int] = (), cache: str | Path | None = None) -> SieveTable:
    """Load ``cache`` if it covers the request, otherwise build (and store)."""
    if cache is not None and Path(cache).exists():
        table = load_sieve(cache)
        if table.limit >= limit and set(ks) <= set(table.dk) | {2}:
            return table
        ks = sorted(set(ks) | set(table.dk))
        limit = max(limit, table.limit)
    table = build_sieve(limit, ks)
    if cache is not None:
        save_sieve(table, cache)
    return table
