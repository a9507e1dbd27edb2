"""Desk-scale verification of the ternary statement and 3AP search.

Every FI prime is 1 mod 4, so a sum of three of them is 3 mod 4; the scans
here confirm that beyond a small threshold every x = 3 (4) in range is such
a sum, enumerate the exceptions, and list three-term arithmetic progressions
inside the FI primes.  The W-tricked sequence normalises LL on a residue
class b mod W so its mean is 1, and the L^q moments of its exponential sum
are estimated on a dense frequency grid (at least 4N points, validated by an
exact Parseval identity at q = 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .local import reference_H, xi
from .primes import (
    CONVENTION_MULTIPLIER,
    euler_phi,
    fi_decompositions,
    fi_primes_upto,
    is_fi_prime,
    mangoldt_table,
    primes_upto,
)


@dataclass(frozen=True)
class RepresentationWitness:
    x: int
    p1: int
    p2: int
    p3: int

    def validate(self) -> bool:
        ps = (self.p1, self.p2, self.p3)
        return (
            self.p1 <= self.p2 <= self.p3
            and sum(ps) == self.x
            and self.x % 4 == 3
            and all(is_fi_prime(p) for p in ps)
            and all(fi_decompositions(p) for p in ps)
        )


def find_representation(
    x: int,
    table: Optional[np.ndarray] = None,
    table_limit: Optional[int] = None,
) -> Optional[RepresentationWitness]:
    """Smallest witness (p1, p2, p3) with p1 <= p2 <= p3 summing to x, if any.

    A caller-supplied ``table`` must cover [2, x]; pass its limit so coverage
    can be validated.
    """
    if x < 3:
        raise ValueError("x must be >= 3")
    if table is not None and table_limit is not None and table_limit < x:
        raise ValueError(f"table covers only [2, {table_limit}] < x = {x}")
    fi = table if table is not None else fi_primes_upto(x)
    fi = fi[fi <= x]
    in_fi = np.zeros(x + 1, dtype=bool)
    in_fi[fi] = True
    for p1 in fi:
        p1 = int(p1)
        if 3 * p1 > x:
            break
        t = x - p1
        # p2 <= t/2 keeps p2 <= p3
        cands = fi[(fi >= p1) & (fi <= t // 2)]
        rest = t - cands
        hits = in_fi[rest]
        if np.any(hits):
            p2 = int(cands[np.argmax(hits)])
            return RepresentationWitness(x=x, p1=p1, p2=p2, p3=t - p2)
    return None


def scan_exceptions(X: int, fi: Optional[np.ndarray] = None) -> np.ndarray:
    """All x = 3 (4), x <= X, that are not a sum of three FI primes.

    Uses two exact convolutions of the FI indicator (FFT, integer-rounded);
    counts stay far below the float64 exactness threshold.
    """
    if X < 3:
        raise ValueError("X must be >= 3")
    if fi is None:
        fi = fi_primes_upto(X)
    ind = np.zeros(X + 1, dtype=np.float64)
    ind[fi[fi <= X]] = 1.0
    two = _exact_bool_convolution(ind, ind, X)
    three = _exact_bool_convolution(two, ind, X)
    xs = np.arange(3, X + 1, 4)
    return xs[~three[xs].astype(bool)]


def _exact_bool_convolution(a: np.ndarray, b: np.ndarray, X: int) -> np.ndarray:
    """Indicator of {i + j : a[i] = b[j] = 1}, truncated to [0, X]."""
    n = len(a) + len(b) - 1
    size = 1 << (n - 1).bit_length()
    fa = np.fft.rfft(a, size)
    fb = np.fft.rfft(b, size)
    conv = np.fft.irfft(fa * fb, size)[: X + 1]
    out = np.zeros(X + 1, dtype=np.float64)
    out[np.rint(conv) >= 1] = 1.0
    return out


def scan_exceptions_direct(X: int) -> np.ndarray:
    """Independent strategy: per-x bitset two-sum check (for cross-validation)."""
    fi = fi_primes_upto(X)
    in_fi = np.zeros(X + 1, dtype=bool)
    in_fi[fi] = True
    out = []
    for x in range(3, X + 1, 4):
        found = False
        for p1 in fi:
            p1 = int(p1)
            if 3 * p1 > x:
                break
            t = x - p1
            cands = fi[(fi >= p1) & (fi <= t // 2)]
            if len(cands) and np.any(in_fi[t - cands]):
                found = True
                break
        if not found:
            out.append(x)
    return np.array(out, dtype=np.int64)


def find_3aps(
    X: int, subset_filter: Optional[Callable[[int], bool]] = None
) -> list[tuple[int, int, int]]:
    """All 3-term APs (p, p + d, p + 2d), d > 0, inside the FI primes <= X."""
    if X < 5:
        raise ValueError("X must be >= 5")
    fi = fi_primes_upto(X)
    if subset_filter is not None:
        fi = np.array([p for p in fi if subset_filter(int(p))], dtype=np.int64)
    in_set = np.zeros(2 * X + 1, dtype=bool)
    in_set[fi] = True
    out: list[tuple[int, int, int]] = []
    for i, p in enumerate(fi):
        p = int(p)
        mids = fi[i + 1 :]
        thirds = 2 * mids - p
        ok = (thirds <= X) & in_set[thirds]
        for mid, third in zip(mids[ok], thirds[ok]):
            out.append((p, int(mid), int(third)))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# W-tricked sequences


def w_from_threshold(x: int, w_override: Optional[float] = None) -> tuple[float, int]:
    """w = 0.1 log log x and W = 2 prod_{p <= w} p (w overridable)."""
    w = w_override if w_override is not None else 0.1 * math.log(math.log(x))
    W = 2
    for p in primes_upto(max(2, int(w))):
        if p <= w:
            W *= int(p)
    return w, W


@dataclass(frozen=True)
class WTrickedSequence:
    x: int
    w: float
    W: int
    b: int
    N: int
    values: np.ndarray  # values[n] for 1 <= n <= N; index 0 unused

    @property
    def mean(self) -> float:
        return float(self.values[1:].sum() / self.N)


def wtrick_build(
    x: int,
    b: int,
    w_override: Optional[float] = None,
    W_override: Optional[int] = None,
) -> WTrickedSequence:
    """Normalised W-tricked LL sequence on the class b mod W.

    values(n) = phi(W) / (Xi(W, b) W R H) * LL(W n + b) for n <= N = x // W,
    where R is the calibrated pair-convention multiplier of LL against H x
    (1/2 here); with it the empirical mean tends to 1.  Admissibility:
    gcd(b, W) = 1 and b = 1 (4).  W_override forces an explicit even modulus
    (for probing classes outside the 2 prod_{p <= w} p family).
    """
    if W_override is not None:
        if W_override < 2 or W_override % 2:
            raise ValueError("W_override must be even and >= 2")
        w, W = float("nan"), W_override
    else:
        w, W = w_from_threshold(x, w_override)
    if not (1 <= b <= W):
        raise ValueError("need 1 <= b <= W")
    if math.gcd(b, W) != 1 or b % 4 != 1:
        raise ValueError(f"b={b} is not admissible for W={W}")
    xi_wb = xi(W, b)
    if xi_wb == 0:
        raise ValueError(f"Xi({W}, {b}) = 0; the class carries no mass")
    N = x // W
    ll = _ll_progression(W * N + b, W, b)
    scale = euler_phi(W) / (float(xi_wb) * W * CONVENTION_MULTIPLIER * reference_H())
    values = np.zeros(N + 1, dtype=np.float64)
    ns = np.arange(1, N + 1, dtype=np.int64)
    values[1:] = scale * ll[W * ns + b]
    return WTrickedSequence(x=x, w=w, W=W, b=b, N=N, values=values)


def _ll_progression(x: int, W: int, b: int) -> np.ndarray:
    """LL(m) for m <= x restricted to m = b (W), by pair iteration."""
    inner = np.zeros(x + 1, dtype=np.float64)
    if x >= 5:
        for l in primes_upto(math.isqrt(x - 1)):
            l = int(l)
            kmax = math.isqrt(x - l * l)
            if kmax < 1:
                continue
            ks = np.arange(1, kmax + 1, dtype=np.int64)
            ns = ks * ks + l * l
            keep = ns % W == b % W
            if np.any(keep):
                np.add.at(inner, ns[keep], math.log(l))
    lam = mangoldt_table(x)
    return inner * lam


def lq_moment(seq: WTrickedSequence, q: float, grid: int) -> float:
    """Grid estimate of int_0^1 |sum f(n) e(gamma n)|^q dgamma, over N^(q-1).

    The integrand oscillates at scale 1/N, so the grid must be >= 4N.
    """
    if not 2.0 <= q < 3.0:
        raise ValueError("need 2 <= q < 3")
    if grid < 4 * seq.N:
        raise ValueError("grid too coarse; need grid >= 4 N")
    f = np.zeros(grid, dtype=np.float64)
    f[1 : seq.N + 1] = seq.values[1:]
    spectrum = np.abs(np.fft.fft(f))
    moment = float(np.mean(spectrum**q))
    return moment / seq.N ** (q - 1.0)
