import math
from fractions import Fraction

import numpy as np
import pytest

from fiprimes import expsum as E
from fiprimes.gaussian import GaussianInt, enumerate_annulus
from fiprimes.lattice import lattice_new
from fiprimes.primes import fi_decompositions, lambda_lambda_table


def test_s0_examples():
    assert E.s0(0.0, 7) == 7
    assert abs(E.s0(0.5, 4)) < 1e-12
    assert abs(E.s0(1.0 / 3.0, 3)) < 1e-12


def test_s0_matches_direct():
    rng = np.random.default_rng(3)
    for g in rng.uniform(0, 1, 50):
        N = int(rng.integers(1, 200))
        direct = sum(E.e_of(g * n) for n in range(1, N + 1))
        assert E.s0(float(g), N) == pytest.approx(direct, abs=1e-9)


def test_s0_bound(rng):
    for g in rng.uniform(0, 1, 10**4):
        v = abs(E.s0(float(g), 300))
        dist = E.fractional_distance(float(g))
        bound = 300 if dist == 0 else min(300.0, 1.0 / (2.0 * dist))
        assert v <= bound + 1e-9


def test_weighted_expsum_constant():
    assert E.weighted_expsum(lambda n: 1.0, 0.0, 25) == pytest.approx(25.0)


def test_weighted_expsum_unrolls_progression():
    ll = lambda_lambda_table(4000)
    got = E.weighted_expsum(ll, 0.0, 1999, 2, 1)
    expected = sum(ll[m] for m in range(3, 4000, 2))
    assert got.real == pytest.approx(expected, rel=1e-12)


def test_weighted_expsum_ll_damping_at_third():
    x = 10**5
    ll = lambda_lambda_table(x)
    N = (x - 1) // 2
    s_zero = E.weighted_expsum(ll, 0.0, N, 2, 1)
    s_third = E.weighted_expsum(ll, 1.0 / 3.0, N, 2, 1)
    assert abs(s_third) / abs(s_zero) < 0.75


def test_arc_classification():
    arcs = E.ArcDecomposition(x=10**8, exponent=2.0)
    assert arcs.q_bound == 339
    assert 2 * arcs.radius * arcs.q_bound**2 < 1.0  # arcs are disjoint
    assert arcs.classify(1.0 / 3.0) == E.Arc(q=3, a=1)
    assert arcs.classify(0.9999999999) == E.Arc(q=1, a=0)
    assert arcs.classify(1e-9) == E.Arc(q=1, a=0)
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    assert arcs.classify(golden) is None


def test_arc_grid_vector_scalar_agree():
    arcs = E.ArcDecomposition(x=10**8, exponent=2.0)
    gs = np.arange(2000) / 2000.0
    qm = arcs.classify_grid(gs)
    for i in range(0, 2000, 17):
        scalar = arcs.classify(float(gs[i]))
        assert (scalar is not None) == (qm[i] > 0)
        if scalar is not None:
            assert scalar.q == qm[i]


def test_arc_full_exponent_covers_everything():
    arcs = E.ArcDecomposition(x=10**6, exponent=E.ARC_EXPONENT_FULL)
    assert arcs.radius > 1.0  # the major arcs swallow [0, 1] at desk x


def test_arc_grid_million_points_all_classified():
    arcs = E.ArcDecomposition(x=10**8, exponent=2.0)
    gs = np.arange(10**6) / 10**6
    qs = arcs.classify_grid(gs)
    assert len(qs) == 10**6
    frac_major = float((qs > 0).mean())
    assert 0.1 < frac_major < 0.5  # a nontrivial partition
    # rationals with small denominators land on their own arc
    assert qs[0] == 1
    assert qs[500000] == 2  # gamma = 1/2
    assert qs[333333] == 3  # nearest rational to 0.333333 within radius is 1/3


def test_type1_zero_frequency_counts_representations():
    x = 5000
    v = E.type1_sum(0.0, 1, lambda l: 1.0, 1, 1, x)
    brute = sum(len(fi_decompositions(n)) for n in range(1, x + 1))
    assert v == pytest.approx(brute, rel=1e-12)


def test_type1_empty():
    assert E.type1_sum(0.25, 0, lambda l: 1.0, 1, 1, 1000) == 0.0


def test_type1_phase_variants_differ():
    a = E.type1_sum(0.37, 20, lambda l: 1.0, 1, 1, 20000, phase="n")
    b = E.type1_sum(0.37, 20, lambda l: 1.0, 1, 1, 20000, phase="dn")
    assert a != b


def test_type1_minor_arc_smaller():
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    v_half = E.type1_sum(0.5, 100, lambda l: 1.0, 1, 1, 10**6)
    v_gold = E.type1_sum(golden, 100, lambda l: 1.0, 1, 1, 10**6)
    assert v_half > 2.0 * v_gold


def test_type2_lattice_sum_zero_frequency():
    lat = lattice_new(GaussianInt(1, 1), 2, GaussianInt(1, 3), 2)
    res = E.type2_lattice_sum(0.0, lat, 4, 64)
    assert res.value == pytest.approx(sum(res.norm_counts.values()))


def test_type2_alternating_full_lattice():
    lat = lattice_new(GaussianInt(1, 0), 1, GaussianInt(0, 1), 1)
    res = E.type2_lattice_sum(0.5, lat, 0, 50)
    direct = sum((-1) ** m.norm() for m in enumerate_annulus(0, 50))
    assert res.value == pytest.approx(direct, abs=1e-9)


def test_type2_dual_routes_bitwise():
    import random

    rnd = random.Random(9)
    done = 0
    while done < 25:
        l1 = GaussianInt(rnd.randint(-9, 9), rnd.randint(-9, 9))
        l2 = GaussianInt(rnd.randint(-9, 9), rnd.randint(-9, 9))
        if l1.is_zero() or l2.is_zero():
            continue
        if math.gcd(abs(l1.re), abs(l1.im)) != 1 or math.gcd(abs(l2.re), abs(l2.im)) != 1:
            continue
        lat = lattice_new(l1, rnd.choice([1, 2, 3, 5, 6, 7]), l2, rnd.choice([1, 2, 3, 5, 6, 7]))
        res = E.type2_lattice_sum(rnd.random(), lat, 2 * lat.delta, 40 * lat.delta)
        assert res.value == res.value_direct  # identical, not merely close
        done += 1


def test_type2_basis_route_faster_at_large_delta():
    lat = lattice_new(GaussianInt(3, 4), 105, GaussianInt(2, 7), 110)
    assert lat.delta == 11550
    res = E.type2_lattice_sum(0.37, lat, 40 * lat.delta, 80 * lat.delta)
    assert res.time_basis < res.time_direct


def test_min_sum_examples():
    assert E.min_sum(Fraction(1, 2), 4, 10.0) == pytest.approx(24.0)
    assert E.min_sum(Fraction(1, 3), 1, 5.0) == pytest.approx(3.0)
    assert E.min_sum(Fraction(1, 3), 1, 2.0) == pytest.approx(2.0)
    J = 8
    g = Fraction(1, 2 * J)
    direct = sum(min(100.0, 1.0 / abs(float(g * j) - round(g * j))) for j in range(1, J + 1))
    assert E.min_sum(g, J, 100.0) == pytest.approx(direct)


def test_min_sum_float_near_rational_uses_exact_path():
    # 1/3 as a float is within 1e-15 of the rational; no underflow blowup
    v = E.min_sum(1.0 / 3.0, 9, 1e6)
    assert v == E.min_sum(Fraction(1, 3), 9, 1e6)


def test_min_sum_multiplier():
    assert E.min_sum(Fraction(1, 4), 4, 50.0, multiplier=2) == pytest.approx(
        E.min_sum(Fraction(1, 2), 4, 50.0, multiplier=1)
    )


def test_min_sum_against_classical_bound():
    import random

    rnd = random.Random(12)
    for _ in range(150):
        q = rnd.randint(1, 1000)
        choices = [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
        a = rnd.choice(choices)
        J = rnd.choice([10, 100, 1000, 10**4, 10**5])
        K = rnd.choice([1.0, 10.0, 100.0, 1000.0])
        v = E.min_sum(Fraction(a, q), J, K)
        assert v <= 8.0 * E.min_sum_bound(a, q, J, K)


def test_dfi_reference_instance():
    c = np.zeros(101, dtype=np.complex128)
    c[1:] = 1.0
    parts = E.dfi_decompose(c, z=11.0, U1=3.0, U2=5.0, D_I=50.0, K=3)
    # exact bookkeeping on the reference instance, frozen values
    assert parts.total == pytest.approx(21.0)
    assert parts.type1_part == pytest.approx(11.0)
    assert parts.sieved_tail == pytest.approx(1.0)
    assert parts.residual == pytest.approx(
        parts.total - parts.sieved_tail - parts.type1_part - sum(parts.type2_parts)
    )
    assert abs(parts.residual) == pytest.approx(6.0)
    assert abs(parts.residual) <= parts.residual_bound


def test_dfi_primes_above_z():
    from fiprimes.primes import primes_upto

    c = {int(p): 1.0 + 0j for p in primes_upto(400) if p > 11}
    parts = E.dfi_decompose(c, z=11.0, U1=3.0, U2=5.0, D_I=50.0, K=3)
    assert parts.total == pytest.approx(sum(c.values()))
    assert all(abs(b) < 1e-12 for b in parts.type2_parts)
    assert abs(parts.sieved_tail) < 1e-12


def test_dfi_ll_weighted_instance():
    x = 10**5
    ll = lambda_lambda_table(x)
    ns = np.arange(x + 1)
    c = ll * np.exp(2j * np.pi * 0.1234 * ns)
    parts = E.dfi_decompose(c, z=50.0, U1=5.0, U2=20.0, D_I=300.0, K=4)
    assert abs(parts.residual) <= parts.residual_bound


def test_dfi_validates_parameters():
    c = np.ones(50, dtype=np.complex128)
    with pytest.raises(ValueError):
        E.dfi_decompose(c, z=5.0, U1=3.0, U2=4.0, D_I=4.5, K=2)  # K < 3
