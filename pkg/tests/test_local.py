import math
from fractions import Fraction

import pytest

from fiprimes import local as L


def test_chi():
    assert L.chi(5) == 1
    assert L.chi(7) == -1
    assert L.chi(6) == 0
    assert [L.chi(n) for n in range(1, 9)] == [1, 0, -1, 0, 1, 0, -1, 0]


def test_psi_prime_examples():
    assert L.psi_prime(3) == Fraction(2, 3)
    assert L.psi_prime(2) == Fraction(1)
    assert L.psi_prime(15) == Fraction(8, 9)


def test_psi0_examples():
    assert L.psi0(5) == Fraction(1, 3)
    assert L.psi0(3) == Fraction(-1, 3)
    assert L.psi0(9) == 0
    assert L.psi0(1) == 1


def test_psi_prime_is_psi0_divisor_sum():
    for l in (1, 2, 3, 5, 6, 15, 30, 105, 210):
        divisor_sum = sum(L.psi0(r) for r in L._divisors(l))
        assert L.psi_prime(l) == divisor_sum


def test_rho_density_examples():
    assert L.rho_density(1, 3, 1) == 1
    assert L.rho_density(1, 3, 2) == 2
    assert L.rho_density(0, 2, 1) == 1


def test_xi_pinned_values():
    assert L.xi(2, 1) == 1
    assert L.xi(4, 3) == 0
    assert L.xi(3, 1) == Fraction(2, 3)
    assert L.xi(3, 2) == Fraction(4, 3)


def test_xi_4_1_is_two_by_definition():
    # the class 1 mod 4 carries all the FI mass, so the mean-one
    # normalisation forces Xi(4,1) = phi(4) = 2; the defining sum agrees
    assert L.xi(4, 1) == 2
    assert L.xi_bruteforce(4, 1) == 2


def test_xi_zero_off_coprime():
    assert L.xi(6, 3) == 0
    assert L.xi(10, 5) == 0


def test_xi_matches_bruteforce_small():
    for q in range(1, 300):
        row = L._default_evaluator.coprime_rho_row(q)
        pp = L.psi_prime(q)
        from fiprimes.primes import euler_phi

        phi = euler_phi(q)
        for a in range(q):
            fast = L.xi(q, a)
            if math.gcd(a, q) != 1:
                assert fast == 0
            else:
                assert fast == pp * int(row[a]) / phi, (q, a)


def test_coprime_rho_row_against_direct_double_loop():
    # validates the FFT-convolution oracle itself against the raw count
    for q in (2, 3, 4, 8, 12, 30, 45, 97, 128, 210):
        row = L._default_evaluator.coprime_rho_row(q)
        for a in range(q):
            direct = sum(
                L.rho_density(c, q, a) for c in range(1, q + 1) if math.gcd(c, q) == 1
            )
            assert int(row[a]) == direct, (q, a)


def test_xi_power_blind():
    for p in (3, 5, 7):
        for a in (1, 2, p - 1):
            base = L.xi(p, a)
            for r in (2, 3, 4):
                assert L.xi(p**r, a) == base
    for r in (2, 3, 4, 5):
        assert L.xi(2**r, 1) == L.xi(4, 1)
        assert L.xi(2**r, 3) == L.xi(4, 3)


def test_xi_periodic():
    for q in (7, 12, 45):
        for a in range(q):
            assert L.xi(q, a) == L.xi(q, a + q) == L.xi(q, a - q)


def test_xi_mean_one_at_primes():
    from fiprimes.primes import primes_upto

    for p in primes_upto(100):
        p = int(p)
        total = sum(L.xi(p, a) for a in range(1, p))
        assert total == p - 1, p


def test_euler_H_partial_products():
    v3, _ = L.euler_H(3)
    assert v3 == pytest.approx(2.25, abs=1e-15)
    v5, _ = L.euler_H(5)
    assert v5 == pytest.approx(2.109375, abs=1e-15)


def test_euler_H_converged():
    v, tail = L.euler_H(10**7)
    assert tail < 1e-6
    assert v == pytest.approx(2.15641034, abs=5e-7)  # repository reference H


def test_euler_H_tail_shrinks():
    v6, t6 = L.euler_H(10**6)
    v7, t7 = L.euler_H(10**7)
    assert abs(v7 - v6) <= t6
    assert t7 < t6


def test_psi_factors():
    pf = L.psi_factors(1, 3)
    assert pf.psi_prime_q == Fraction(2, 3)
    assert pf.psi0_table[3] == Fraction(-1, 3)
    # psi(1) equals the completed product 2 H / pi
    h, _ = L.euler_H(10**6)
    assert pf.psi_l == pytest.approx(2 * h / math.pi, rel=1e-12)
    assert pf.psi_l_tail < 1e-4


def test_psi_factors_cutoff_error():
    with pytest.raises(ValueError):
        L.psi_factors(1, 3, cutoff=10**3, tol=1e-9)


def test_xi_extremes_examples():
    large = L.xi_extremes(3, "large")
    assert (large.q, large.a, large.xi_value) == (3, 2, Fraction(4, 3))
    small = L.xi_extremes(5, "small")
    assert small.q == 5 and small.xi_value == Fraction(2, 3)


def test_xi_extremes_growth():
    values = [float(L.xi_extremes(10**k, "large").xi_value) for k in range(1, 7)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[-1] > 2.0  # q = 4 * 3 * 7 * 11 * 19 * 23 reaches 3.65
    small = [float(L.xi_extremes(10**k, "small").xi_value) for k in (2, 4, 6)]
    assert all(b <= a for a, b in zip(small, small[1:]))


def test_xi_extreme_consistency():
    res = L.xi_extremes(10**4, "large")
    assert L.xi(res.q, res.a) == res.xi_value
    assert res.q <= 10**4
