"""Combinatorial beta-sieve weights and the FI-prime majorant.

The beta-sieve of level D and sifting range P keeps the Moebius weight
mu(d) on squarefree d = p1 > p2 > ... > pn (all in P) whose prefixes satisfy

    p1 ... pm * pm^beta < D   for every odd m   (upper sieve)
    p1 ... pm * pm^beta < D   for every even m  (lower sieve)

beta = 2 is the linear sieve, beta = 10 a fundamental-lemma sieve.  The
composed sieve multiplies a beta=10 stage over the small primes P(z0) with a
beta=2 stage over P(z, z0), and satisfies the sandwich

    theta_minus(n) <= [no prime factor of n in the sifted range] <= theta_plus(n).

The majorant for the weight LL is assembled from three weights on the inner
variable l (upper sieve, switched lower sieve over one mid-range prime, and
a rough-number term over three mid-range primes), an outer sieve Omega, and
an explicit error term E supported on prime powers with small base and on l
with a large repeated prime factor.  Pointwise LL(n) <= Lambda_plus(n, x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .primes import (
    distinct_prime_factors,
    factorize,
    mangoldt,
    mangoldt_table,
)
from .quadrature import adaptive_simpson

EULER_GAMMA = 0.5772156649015329

SUPPORT_CAP = 10**7


@dataclass(frozen=True)
class MajorantParams:
    """Fixed parameter set for the majorant at scale x.

    The orderings z0 < z1 < z and z1 < D1 hold only for astronomically large
    x; at desk scales z0 typically exceeds z1 and the beta=2 stage of the
    inner sieve is trivial.  Construction therefore validates only x >= 16.
    """

    x: int
    xi: float = 0.265
    xi1: float = 0.183
    delta0: float = 1e-7

    def __post_init__(self) -> None:
        if self.x < 16:
            raise ValueError("x must be >= 16")
        if not 0 < self.xi1 < self.xi < 1:
            raise ValueError("need 0 < xi1 < xi < 1")

    @property
    def z(self) -> float:
        return self.x ** (self.xi / 2)

    @property
    def z1(self) -> float:
        return self.x ** (self.xi1 / 2)

    @property
    def z0(self) -> float:
        return math.exp(math.log(self.x) ** (1.0 / 3.0))

    @property
    def D0(self) -> float:
        return math.exp(math.log(self.x) ** (2.0 / 3.0))

    @property
    def D1(self) -> float:
        return self.x ** (1.0 / 3.0 - self.delta0)

    @property
    def omega_level(self) -> float:
        return self.x ** (0.5 - self.delta0)

    @property
    def omega_range(self) -> float:
        return self.x ** (0.5 - 2.0 * self.delta0)

    @property
    def log_sqrt_x(self) -> float:
        return 0.5 * math.log(self.x)


# ---------------------------------------------------------------------------
# explicit weight sets


@dataclass(frozen=True)
class SieveWeightSet:
    """Materialised map d -> lambda_d for one sign of the beta-sieve."""

    level: float
    beta: float
    prime_range: tuple[int, ...]
    sign: int
    weights: dict[int, int]

    def theta(self, n: int) -> int:
        return sum(w for d, w in self.weights.items() if n % d == 0)


def _prefix_ok(m: int, prod: int, p: int, beta: float, level: float, sign: int) -> bool:
    """Condition on the m-th prefix when appending prime p (prod includes p)."""
    constrained = (m % 2 == 1) if sign > 0 else (m % 2 == 0)
    if not constrained:
        return True
    return prod * p**beta < level


def beta_sieve_weights(
    D: float, beta: float, P: Iterable[int], cap: int = SUPPORT_CAP
) -> tuple[SieveWeightSet, SieveWeightSet]:
    """Explicit upper and lower weight sets of level D over the primes P."""
    if D < 2:
        raise ValueError("level must be >= 2")
    ps = tuple(sorted(set(int(p) for p in P), reverse=True))
    out = []
    for sign in (+1, -1):
        weights: dict[int, int] = {}

        def rec(start: int, depth: int, prod: int, mu: int) -> None:
            if len(weights) >= cap:
                raise ValueError(f"support exceeds cap {cap}")
            weights[prod] = mu
            for j in range(start, len(ps)):
                p = ps[j]
                if _prefix_ok(depth + 1, prod * p, p, beta, D, sign):
                    rec(j + 1, depth + 1, prod * p, -mu)

        rec(0, 0, 1, 1)
        out.append(
            SieveWeightSet(level=D, beta=beta, prime_range=ps, sign=sign, weights=weights)
        )
    return out[0], out[1]


def _theta_eval(ps_desc: tuple[int, ...], D: float, beta: float, sign: int) -> int:
    """theta(n) for n whose distinct in-range primes are ps_desc, by chain DFS."""
    total = 0

    def rec(start: int, depth: int, prod: int, mu: int) -> None:
        nonlocal total
        total += mu
        for j in range(start, len(ps_desc)):
            p = ps_desc[j]
            if _prefix_ok(depth + 1, prod * p, p, beta, D, sign):
                rec(j + 1, depth + 1, prod * p, -mu)

    rec(0, 0, 1, 1)
    return total


def composed_theta_factored(
    prime_factors: Iterable[int],
    D: float,
    D0: float,
    z: float,
    z0: float,
    sign: int,
) -> int:
    """Composed sieve value from the distinct prime factors of n."""
    ps = sorted(set(prime_factors), reverse=True)
    stage1 = tuple(p for p in ps if p <= z0)
    stage2 = tuple(p for p in ps if z0 < p <= z)
    t1 = _theta_eval(stage1, D0, 10, sign)
    t2 = _theta_eval(stage2, D, 2, sign)
    return t1 * t2


def composed_theta(
    n: int,
    params: MajorantParams,
    sign: int,
    level_override: Optional[float] = None,
) -> int:
    """theta_pm(n) for the inner-variable sieve (level D1, ranges z1/z0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    D = level_override if level_override is not None else params.D1
    return composed_theta_factored(
        distinct_prime_factors(n), D, params.D0, params.z1, params.z0, sign
    )


def sifted_indicator(n: int, z: float, z0: float) -> int:
    """1 iff n has no prime factor in the composed sifting set (0, max(z, z0)]."""
    bound = max(z, z0)
    return 0 if any(p <= bound for p in distinct_prime_factors(n)) else 1


# ---------------------------------------------------------------------------
# linear sieve functions


def linear_sieve_F(s: float) -> float:
    """Upper linear-sieve function: 2 e^gamma / s on [1,3], extended on [3,5]."""
    if not 1.0 <= s <= 5.0:
        raise ValueError("F(s) supported on [1, 5]")
    base = 2.0 * math.exp(EULER_GAMMA) / s
    if s <= 3.0:
        return base
    integral, _ = adaptive_simpson(lambda t: math.log(t - 1.0) / t, 2.0, s - 1.0, 1e-12)
    return base * (1.0 + integral)


def linear_sieve_f(s: float) -> float:
    """Lower linear-sieve function 2 e^gamma log(s-1) / s on [2, 4]."""
    if not 2.0 <= s <= 4.0:
        raise ValueError("f(s) supported on [2, 4]")
    return 2.0 * math.exp(EULER_GAMMA) * math.log(s - 1.0) / s


# ---------------------------------------------------------------------------
# the switching inequality


@dataclass(frozen=True)
class PanCheck:
    holds: bool
    lhs: int
    rhs: Fraction
    mid_factor_count: int


def pan_inequality_check(l: int, params: MajorantParams) -> PanCheck:
    """Verify the switching inequality for squarefree l <= sqrt(x).

    rho(l, z) <= rho(l, z1) - 1/2 sum_{z1 <= p < z, l = pm} rho(m, z1)
                          + 1/2 sum_{z1 <= p1 < p2 < p3 < z, l = p1p2p3m} rho(m, p1)

    With r mid-range factors and a z-rough cofactor the right side is
    1, 1/2, 0, 0, 1/2, 3/2 for r = 0..5.
    """
    facs = factorize(l)
    if any(e > 1 for _, e in facs):
        raise ValueError("l must be squarefree")
    z, z1 = params.z, params.z1
    primes = [p for p, _ in facs]
    lhs = 0 if any(p <= z for p in primes) else 1
    rho_l_z1 = 0 if any(p <= z1 for p in primes) else 1
    mids = [p for p in primes if z1 <= p < z]
    rhs = Fraction(rho_l_z1)
    for p in mids:
        rest = [q for q in primes if q != p]
        rhs -= Fraction(1, 2) * (0 if any(q <= z1 for q in rest) else 1)
    for p1, p2, p3 in combinations(sorted(mids), 3):
        rest = [q for q in primes if q not in (p1, p2, p3)]
        rhs += Fraction(1, 2) * (0 if any(q <= p1 for q in rest) else 1)
    return PanCheck(holds=Fraction(lhs) <= rhs, lhs=lhs, rhs=rhs, mid_factor_count=len(mids))


# ---------------------------------------------------------------------------
# majorant assembly


def _all_decompositions(n: int) -> list[tuple[int, int]]:
    """All (k, l) with k, l >= 1 and k^2 + l^2 = n."""
    out = []
    l = 1
    while l * l < n:
        rem = n - l * l
        k = math.isqrt(rem)
        if k * k == rem and k >= 1:
            out.append((k, l))
        l += 1
    return out


class MajorantEvaluator:
    """Caches the inner weights w1, w2, w3 and error parts per l <= sqrt(x)."""

    def __init__(self, params: MajorantParams):
        self.params = params
        self._w: dict[int, tuple[float, float, float, float]] = {}

    def weights(self, l: int) -> tuple[float, float, float]:
        return self.weights_with_error(l)[:3]

    def weights_with_error(self, l: int) -> tuple[float, float, float, float]:
        cached = self._w.get(l)
        if cached is not None:
            return cached
        p = self.params
        logsx = p.log_sqrt_x
        facs = factorize(l)
        primes = [q for q, _ in facs]
        distinct = sorted(set(primes), reverse=True)

        w1 = logsx * composed_theta_factored(distinct, p.D1, p.D0, p.z1, p.z0, +1)

        w2 = 0.0
        mids = [q for q in set(primes) if p.z1 <= q < p.z]
        for q in mids:
            m_factors = _cofactor_primes(facs, {q: 1})
            w2 -= 0.5 * logsx * composed_theta_factored(
                m_factors, p.D1 / q, p.D0, p.z1, p.z0, -1
            )

        w3 = 0.0
        for q1, q2, q3 in combinations(sorted(mids), 3):
            m_factors = _cofactor_primes(facs, {q1: 1, q2: 1, q3: 1})
            if all(q > q1 for q in m_factors):
                w3 += 0.5 * logsx

        lam_l = mangoldt(l)
        e1 = lam_l if (len(facs) == 1 and facs[0][0] <= p.z) else 0.0
        e2 = e1
        if any(e > 1 and q > p.z1 for q, e in facs):
            e2 = e1 + max(0.0, lam_l - (w1 + w2 + w3) - e1)

        result = (w1, w2, w3, e2)
        self._w[l] = result
        return result

    def omega_outer(self, n: int) -> float:
        """Outer upper sieve Omega(n, x) = theta_plus(n; level x^(1/2-d0)) log x."""
        p = self.params
        theta = composed_theta_factored(
            distinct_prime_factors(n), p.omega_level, p.D0, p.omega_range, p.z0, +1
        )
        return theta * math.log(p.x)

    def e3(self, n: int) -> float:
        facs = factorize(n)
        if len(facs) == 1 and facs[0][0] <= self.params.omega_range:
            return mangoldt(n)
        return 0.0

    def lambda_plus(self, n: int) -> float:
        """The pointwise majorant Lambda_plus(n, x) >= LL(n)."""
        if n > self.params.x:
            raise ValueError("n must be <= x")
        s1 = s2 = s3 = se2 = 0.0
        for _, l in _all_decompositions(n):
            w1, w2, w3, e2 = self.weights_with_error(l)
            s1 += w1
            s2 += w2
            s3 += w3
            se2 += e2
        lam = mangoldt(n)
        total = lam * (s1 + s2)
        if s3:
            total += (self.omega_outer(n) + self.e3(n)) * s3
        total += lam * se2
        return total


def majorant_weights(l: int, params: MajorantParams) -> tuple[float, float, float]:
    return MajorantEvaluator(params).weights(l)


def majorant_Omega(n: int, params: MajorantParams) -> float:
    return MajorantEvaluator(params).omega_outer(n)


def assemble_majorant(n: int, params: MajorantParams) -> float:
    return MajorantEvaluator(params).lambda_plus(n)


def _cofactor_primes(facs: list[tuple[int, int]], removed: dict[int, int]) -> list[int]:
    """Distinct primes of n / prod(removed) given the factorization of n."""
    out = []
    for p, e in facs:
        if e - removed.get(p, 0) > 0:
            out.append(p)
    return out


@dataclass(frozen=True)
class MajorantTable:
    """Bulk arrays over n <= x: the majorant and its components."""

    lam_plus: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    error: np.ndarray


def majorant_table(x: int, params: Optional[MajorantParams] = None) -> MajorantTable:
    """Vectorised Lambda_plus over all n <= x via (k, l) pair iteration."""
    params = params or MajorantParams(x=x)
    ev = MajorantEvaluator(params)
    root = math.isqrt(x - 1)
    s1 = np.zeros(x + 1)
    s2 = np.zeros(x + 1)
    s3 = np.zeros(x + 1)
    se2 = np.zeros(x + 1)
    for l in range(1, root + 1):
        kmax = math.isqrt(x - l * l)
        if kmax < 1:
            continue
        w1, w2, w3, e2 = ev.weights_with_error(l)
        ks = np.arange(1, kmax + 1, dtype=np.int64)
        ns = ks * ks + l * l
        if w1:
            np.add.at(s1, ns, w1)
        if w2:
            np.add.at(s2, ns, w2)
        if w3:
            np.add.at(s3, ns, w3)
        if e2:
            np.add.at(se2, ns, e2)
    lam = mangoldt_table(x)
    lam_plus = lam * (s1 + s2 + se2)
    error = lam * se2
    if np.any(s3):
        idx = np.flatnonzero(s3)
        outer = np.array([ev.omega_outer(int(n)) + ev.e3(int(n)) for n in idx])
        lam_plus[idx] += outer * s3[idx]
        error[idx] += np.array([ev.e3(int(n)) for n in idx]) * s3[idx]
    return MajorantTable(lam_plus=lam_plus, s1=s1, s2=s2, s3=s3, error=error)
