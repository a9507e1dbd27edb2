"""Prime sieving and the weighted count of primes of the form k^2 + (prime)^2.

A prime p with p = k^2 + l^2, k >= 1 an integer and l prime, is called an
FI prime here.  The weight carried through the whole package is

    LL(n) = Lambda(n) * sum_{n = k^2 + l^2, k >= 1, l prime} log l,

where Lambda is the von Mangoldt function.  Summing LL(n) over n <= x is done
by visiting (k, l) pairs directly instead of factoring every n, which keeps
the work near-linear in x.  The expected mean value of LL is governed by the
Euler product H computed in :mod:`fiprimes.local`.

Convention: the representation count is over ordered pairs with k >= 1 and l
prime, so e.g. 13 = 2^2 + 3^2 = 3^2 + 2^2 contributes both (k,l) = (2,3) and
(3,2).  Under this convention sum_{n<=x} LL(n) ~ (H/2) x; the factor 1/2
against H x is the calibrated pair-convention multiplier (a sum over k of
both signs would give H x).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional

import numpy as np


class CapacityError(ValueError):
    """A request exceeds the configured memory/size caps."""


MAX_SEGMENT = 1 << 27          # bits per sieve segment
MAX_BASE = 10**8               # largest allowed sqrt(hi)
MAX_COUNT_X = 2 * 10**9        # cap for fi_weighted_count

# Calibrated pair-convention multiplier: sum_{n<=x} LL(n) ~ R * H * x under
# the ordered (k >= 1, l prime) convention.  Empirically the ratio sits at
# 0.486 by x = 1e7 and 0.491 by 4e7.  A k-over-both-signs convention would
# give R = 1.
CONVENTION_MULTIPLIER = 0.5

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=32)
def simple_sieve(limit: int) -> np.ndarray:
    """Boolean primality array of length limit+1 (index = integer)."""
    if limit < 0:
        raise ValueError("limit must be >= 0")
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[: min(2, limit + 1)] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    is_prime.setflags(write=False)
    return is_prime


@lru_cache(maxsize=32)
def primes_upto(limit: int) -> np.ndarray:
    """Sorted array of primes <= limit."""
    primes = np.flatnonzero(simple_sieve(limit)).astype(np.int64)
    primes.setflags(write=False)
    return primes


@lru_cache(maxsize=8)
def spf_table(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    spf.setflags(write=False)
    return spf


def factorize(n: int, spf: Optional[np.ndarray] = None) -> list[tuple[int, int]]:
    """Prime factorization as a sorted list of (p, exponent)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[tuple[int, int]] = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def distinct_prime_factors(n: int, spf: Optional[np.ndarray] = None) -> list[int]:
    return [p for p, _ in factorize(n, spf)]


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def is_prime_int(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def mangoldt(n: int) -> float:
    """Von Mangoldt Lambda(n): log p if n = p^j, else 0."""
    if n < 2:
        return 0.0
    if is_prime_int(n):
        return math.log(n)
    for j in range(2, n.bit_length() + 1):
        r = round(n ** (1.0 / j))
        for cand in (r - 1, r, r + 1):
            if cand >= 2 and cand**j == n and is_prime_int(cand):
                return math.log(cand)
    return 0.0


def mangoldt_table(x: int) -> np.ndarray:
    """Array of Lambda(n) for 0 <= n <= x."""
    lam = np.zeros(x + 1, dtype=np.float64)
    pr = primes_upto(x) if x >= 2 else np.array([], dtype=np.int64)
    lam[pr] = np.log(pr.astype(np.float64))
    for p in primes_upto(math.isqrt(x)):
        p = int(p)
        pk = p * p
        lp = math.log(p)
        while pk <= x:
            lam[pk] = lp
            pk *= p
    return lam


def prime_power_map(x: int) -> dict[int, float]:
    """{p^j: log p} for prime powers p^j <= x with j >= 2."""
    out: dict[int, float] = {}
    for p in primes_upto(math.isqrt(x)):
        p = int(p)
        lp = math.log(p)
        pk = p * p
        while pk <= x:
            out[pk] = lp
            pk *= p
    return out


# ---------------------------------------------------------------------------
# segmented sieving


@dataclass(frozen=True)
class PrimeTable:
    """Primality bitset over the half-open interval (lo, hi].

    bits[i] corresponds to n = lo + 1 + i.
    """

    lo: int
    hi: int
    bits: np.ndarray

    def contains(self, n: int) -> bool:
        if not (self.lo < n <= self.hi):
            raise ValueError(f"{n} outside ({self.lo}, {self.hi}]")
        return bool(self.bits[n - self.lo - 1])

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.bits) + self.lo + 1

    def count(self) -> int:
        return int(self.bits.sum())


def sieve_range(lo: int, hi: int, max_segment: int = MAX_SEGMENT) -> PrimeTable:
    """Segmented sieve for the interval (lo, hi].

    Memory is O(sqrt(hi) + (hi - lo)); a CapacityError is raised when either
    the segment or the base sieve would exceed the configured caps.
    """
    if not (0 <= lo < hi):
        raise ValueError(f"need 0 <= lo < hi, got ({lo}, {hi})")
    if hi - lo > max_segment:
        raise CapacityError(f"segment length {hi - lo} exceeds cap {max_segment}")
    root = math.isqrt(hi)
    if root > MAX_BASE:
        raise CapacityError(f"base sieve bound {root} exceeds cap {MAX_BASE}")
    bits = np.ones(hi - lo, dtype=bool)
    # indices cover n = lo+1 .. hi
    for n in range(lo + 1, min(2, hi + 1)):
        bits[n - lo - 1] = False
    for p in primes_upto(root):
        p = int(p)
        start = max(p * p, ((lo // p) + 1) * p)
        if start > hi:
            continue
        bits[start - lo - 1 :: p] = False
        if lo < p <= hi:
            bits[p - lo - 1] = True
    return PrimeTable(lo=lo, hi=hi, bits=bits)


# ---------------------------------------------------------------------------
# FI decompositions and the LL weight


@dataclass(frozen=True)
class FiDecomposition:
    """A representation n = k^2 + l^2 with k >= 1 and l prime."""

    k: int
    l: int


def fi_decompositions(n: int) -> list[FiDecomposition]:
    """All (k, l) with k >= 1, l prime, k^2 + l^2 = n, sorted by l."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[FiDecomposition] = []
    if n < 5:
        return out
    for l in primes_upto(math.isqrt(n - 1)):
        l = int(l)
        rem = n - l * l
        if rem < 1:
            break
        k = math.isqrt(rem)
        if k * k == rem:
            out.append(FiDecomposition(k=k, l=l))
    return out


def is_fi_prime(p: int) -> bool:
    """True iff p is prime and has a representation k^2 + l^2, l prime, k >= 1."""
    if p < 5 or not is_prime_int(p):
        return False
    return bool(fi_decompositions(p))


def lambda_lambda(n: int) -> float:
    """LL(n) = Lambda(n) * sum over decompositions of log l."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lam = mangoldt(n)
    if lam == 0.0:
        return 0.0
    s = sum(math.log(d.l) for d in fi_decompositions(n))
    return lam * s


def lambda_lambda_table(x: int) -> np.ndarray:
    """Array of LL(n) for 0 <= n <= x, built by pair iteration."""
    inner = np.zeros(x + 1, dtype=np.float64)
    if x >= 5:
        for l in primes_upto(math.isqrt(x - 1)):
            l = int(l)
            kmax = math.isqrt(x - l * l)
            if kmax < 1:
                continue
            ks = np.arange(1, kmax + 1, dtype=np.int64)
            np.add.at(inner, ks * ks + l * l, math.log(l))
    return inner * mangoldt_table(x)


@dataclass(frozen=True)
class FiCountResult:
    value: float
    h: float
    hx: float
    ratio: float


def fi_weighted_count(x: int, h_limit: int = 10**6) -> FiCountResult:
    """sum_{n <= x} LL(n), visiting (k, l) pairs rather than every n.

    Also reports the ratio against H*x.  Under the k >= 1 ordered-pair
    convention the ratio stabilises near 1/2.
    """
    from .local import euler_H

    if x < 2:
        raise ValueError("x must be >= 2")
    if x > MAX_COUNT_X:
        raise CapacityError(f"x={x} exceeds cap {MAX_COUNT_X}")
    is_p = simple_sieve(x)
    pps = prime_power_map(x)
    pp_keys = np.array(sorted(pps), dtype=np.int64)
    pp_vals = np.array([pps[int(k)] for k in pp_keys], dtype=np.float64)
    total = 0.0
    if x >= 5:
        for l in primes_upto(math.isqrt(x - 1)):
            l = int(l)
            kmax = math.isqrt(x - l * l)
            if kmax < 1:
                continue
            ks = np.arange(1, kmax + 1, dtype=np.int64)
            ns = ks * ks + l * l
            prime_part = np.log(ns[is_p[ns]].astype(np.float64)).sum()
            idx = np.searchsorted(pp_keys, ns)
            idx[idx == len(pp_keys)] = 0
            hit = pp_keys[idx] == ns if len(pp_keys) else np.zeros(len(ns), bool)
            pp_part = pp_vals[idx[hit]].sum() if len(pp_keys) else 0.0
            total += math.log(l) * (prime_part + pp_part)
    h, _ = euler_H(h_limit)
    return FiCountResult(value=total, h=h, hx=h * x, ratio=total / (h * x))


def fi_weighted_count_bruteforce(x: int) -> float:
    """Oracle: sum LL(n) by iterating n and decomposing each one."""
    lam = mangoldt_table(x)
    total = 0.0
    for n in range(5, x + 1):
        if lam[n] == 0.0:
            continue
        s = sum(math.log(d.l) for d in fi_decompositions(n))
        if s:
            total += lam[n] * s
    return total


# ---------------------------------------------------------------------------
# FI prime tables with a line-oriented disk cache

CACHE_HEADER = "fi-cache v1"
CACHE_ENV = "FI_CACHE_DIR"


def fi_primes_upto(limit: int, cache_dir: Optional[str | Path] = None) -> np.ndarray:
    """Sorted array of all FI primes <= limit.

    When a cache directory is given (or set via the FI_CACHE_DIR environment
    variable) the table is loaded from disk if a valid cache with a
    sufficient limit exists, and regenerated otherwise.
    """
    if limit < 5:
        return np.array([], dtype=np.int64)
    directory = cache_dir or os.environ.get(CACHE_ENV)
    if directory is not None:
        path = Path(directory) / "fi-primes.txt"
        cached = _load_cache(path)
        if cached is not None:
            cache_limit, arr = cached
            if cache_limit >= limit:
                return arr[arr <= limit]
        arr = _compute_fi_primes(limit)
        _write_cache(path, limit, arr)
        return arr
    return _compute_fi_primes(limit)


def _compute_fi_primes(limit: int) -> np.ndarray:
    is_p = simple_sieve(limit)
    hits = np.zeros(limit + 1, dtype=bool)
    for l in primes_upto(math.isqrt(limit - 1)):
        l = int(l)
        kmax = math.isqrt(limit - l * l)
        if kmax < 1:
            continue
        ks = np.arange(1, kmax + 1, dtype=np.int64)
        ns = ks * ks + l * l
        hits[ns[is_p[ns]]] = True
    return np.flatnonzero(hits).astype(np.int64)


def _load_cache(path: Path) -> Optional[tuple[int, np.ndarray]]:
    if not path.exists():
        return None
    try:
        with path.open("r", encoding="ascii") as fh:
            header = fh.readline().strip().split()
            if len(header) != 3 or " ".join(header[:2]) != CACHE_HEADER:
                return None
            cache_limit = int(header[2])
            values = [int(line) for line in fh if line.strip()]
    except (ValueError, OSError):
        return None
    arr = np.array(values, dtype=np.int64)
    if len(arr) and (np.any(np.diff(arr) <= 0) or arr[-1] > cache_limit or arr[0] < 5):
        return None
    return cache_limit, arr


def _write_cache(path: Path, limit: int, arr: Iterable[int]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="ascii") as fh:
        fh.write(f"{CACHE_HEADER} {limit}\n")
        for p in arr:
            fh.write(f"{int(p)}\n")
