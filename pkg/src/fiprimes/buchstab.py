"""The Buchstab function and counts of rough numbers.

B(u) solves the delayed differential equation (u B(u))' = B(u - 1) with
B(u) = 0 below 1 and B(u) = 1/u on [1, 2].  Equivalently, on each interval
[k, k+1] with integer k >= 2,

    B(u) = (k B(k) + integral_k^u B(v - 1) dv) / u,

which gives the closed form (1 + log(u - 1))/u on [2, 3] and is continued
numerically beyond 3 on a fixed grid.  Everywhere 0 <= B(u) <= 1, and
B(u) <= (1 + log 2)/3 once u >= 3.

An integer is z-rough when all its prime factors exceed z (so 1 is rough
vacuously, indicator rho(n, z)).  Counts of z-rough n <= T are predicted by
integrating B(t, z) = B(log t / log z)/log z, and rho obeys the exact
combinatorial identity rho(n, z) = rho(n, w) + sum_{z < p <= w} rho(n/p, p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .primes import factorize, primes_upto, spf_table
from .quadrature import adaptive_simpson

UPPER_PLATEAU = (1.0 + math.log(2.0)) / 3.0


def _closed_form(u: float) -> float:
    if u < 1.0:
        return 0.0
    if u <= 2.0:
        return 1.0 / u
    return (1.0 + math.log(u - 1.0)) / u


@dataclass
class BuchstabInterpolant:
    """Grid continuation of B(u) on [3, u_max] with step ``h``."""

    u_max: float = 10.0
    h: float = 1e-4
    values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.u_max < 3.0:
            raise ValueError("u_max must be >= 3")
        n = int(round((self.u_max - 3.0) / self.h))
        self.u_max = 3.0 + n * self.h
        vals = np.zeros(n + 1)
        vals[0] = _closed_form(3.0)
        # integrate (u B(u))' = B(u-1) with the trapezoid rule; grid knots
        # sit exactly on the integer kinks, so each panel is smooth
        g_prev = self._lookup_shifted(3.0, vals)
        acc = 3.0 * vals[0]
        for j in range(1, n + 1):
            u = 3.0 + j * self.h
            g_cur = self._lookup_shifted(u, vals)
            acc += 0.5 * self.h * (g_prev + g_cur)
            vals[j] = acc / u
            g_prev = g_cur
        self.values = vals

    def _lookup_shifted(self, u: float, vals: np.ndarray) -> float:
        v = u - 1.0
        if v < 3.0 - 1e-12:
            return _closed_form(v)
        j = (v - 3.0) / self.h
        idx = int(round(j))
        if abs(j - idx) < 1e-9:
            return float(vals[idx])
        lo = int(math.floor(j))
        t = j - lo
        return float((1.0 - t) * vals[lo] + t * vals[lo + 1])

    def eval(self, u: float) -> float:
        if u < 3.0:
            return _closed_form(u)
        if u > self.u_max + 1e-12:
            raise ValueError(f"u={u} beyond u_max={self.u_max}; build a larger table")
        j = (min(u, self.u_max) - 3.0) / self.h
        lo = min(int(math.floor(j)), len(self.values) - 2)
        t = j - lo
        return float((1.0 - t) * self.values[lo] + t * self.values[lo + 1])


@lru_cache(maxsize=4)
def default_interpolant(u_max: float = 10.0, h: float = 1e-4) -> BuchstabInterpolant:
    return BuchstabInterpolant(u_max=u_max, h=h)


def buchstab_B(u: float, interpolant: Optional[BuchstabInterpolant] = None) -> float:
    """B(u): exact piecewise forms below 3, grid continuation beyond."""
    if not math.isfinite(u):
        raise ValueError("u must be finite")
    if u < 3.0:
        return _closed_form(u)
    interp = interpolant or default_interpolant()
    return interp.eval(u)


def rough_indicator(n: int, z: float) -> int:
    """1 iff every prime factor of n exceeds z (vacuous for n = 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for p, _ in factorize(n):
        if p <= z:
            return 0
    return 1


def _rough_indicator_factored(factors: list[int], z: float) -> int:
    return 0 if any(p <= z for p in factors) else 1


@dataclass(frozen=True)
class RoughCount:
    exact: int
    predicted: float
    reliable: bool


def rough_count(T: int, z: float) -> RoughCount:
    """Exact count of z-rough n <= T next to the integral prediction.

    The prediction integrates B(t, z) = B(log t/log z)/log z over (0, T],
    splitting at the kink points t = z^j.  It is flagged unreliable when
    z < T^0.1 (outside the validity range of the approximation); the exact
    count is returned regardless.
    """
    if not (2 <= z <= T):
        raise ValueError("need 2 <= z <= T")
    mask = np.ones(T + 1, dtype=bool)
    mask[0] = False
    for p in primes_upto(int(z)):
        mask[int(p) :: int(p)] = False
    exact = int(np.count_nonzero(mask))

    log_z = math.log(z)
    u_top = math.log(T) / log_z
    interp = default_interpolant() if u_top <= 10.0 else default_interpolant(u_max=math.ceil(u_top) + 1.0)
    predicted = 0.0
    lo = 1.0
    while lo < u_top - 1e-12:
        hi = min(math.floor(lo + 1.0), u_top)
        val, _ = adaptive_simpson(
            lambda u: buchstab_B(u, interp) * math.exp(u * log_z), lo, hi, tol=1e-9 * T
        )
        predicted += val
        lo = hi
    reliable = z >= T**0.1
    return RoughCount(exact=exact, predicted=predicted, reliable=reliable)


def buchstab_identity_check(n: int, z: float, w: float) -> bool:
    """Exact check of rho(n, z) = rho(n, w) + sum_{z < p <= w, p | n} [P-(n/p) >= p].

    The cofactor condition is "no prime factor below p" (>= p rather than
    > p); with a strict cutoff the term at p would miss n divisible by p^2
    and the identity would fail, e.g. at n = 25.  In this form it is an
    exact combinatorial identity for every n >= 1.
    """
    if not z < w:
        raise ValueError("need z < w")
    lhs = rough_indicator(n, z)
    rhs = rough_indicator(n, w)
    for p, _ in factorize(n):
        if z < p <= w:
            m = n // p
            rhs += 1 if all(q >= p for q, _ in factorize(m)) else 0
    return lhs == rhs


def buchstab_identity_scan(limit: int, z: float, w: float) -> int:
    """Number of n <= limit violating the identity (0 expected); bulk version."""
    if not z < w:
        raise ValueError("need z < w")
    spf = spf_table(limit)
    bad = 0
    mid_primes = [int(p) for p in primes_upto(int(w)) if z < p <= w]
    for n in range(1, limit + 1):
        lhs = _rough_int(n, z, spf, strict=True)
        rhs = _rough_int(n, w, spf, strict=True)
        for p in mid_primes:
            if n % p == 0:
                rhs += _rough_int(n // p, p, spf, strict=False)
        if lhs != rhs:
            bad += 1
    return bad


def _rough_int(n: int, z: float, spf: np.ndarray, strict: bool) -> int:
    """1 iff every prime factor of n is > z (strict) or >= z (not strict)."""
    while n > 1:
        p = int(spf[n])
        if p <= z if strict else p < z:
            return 0
        while n % p == 0:
            n //= p
    return 1
