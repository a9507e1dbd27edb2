import math

import numpy as np
import pytest

from fiprimes import primes as P


def test_sieve_range_textbook():
    table = P.sieve_range(0, 30)
    assert list(table.primes()) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_sieve_range_window():
    table = P.sieve_range(10**6, 10**6 + 100)
    assert table.contains(1000003)


def test_sieve_range_empty():
    assert P.sieve_range(0, 1).count() == 0


def test_sieve_range_against_trial_division(rng):
    # 10^4 random integers up to 10^12, in batches sharing a window
    for _ in range(100):
        lo = int(rng.integers(0, 10**12 - 1000))
        table = P.sieve_range(lo, lo + 1000)
        for n in rng.integers(lo + 1, lo + 1001, size=100):
            assert table.contains(int(n)) == P.is_prime_int(int(n))


def test_sieve_range_capacity():
    with pytest.raises(P.CapacityError):
        P.sieve_range(0, 10**9, max_segment=10**6)


def test_fi_decompositions_examples():
    assert [(d.k, d.l) for d in P.fi_decompositions(13)] == [(3, 2), (2, 3)]
    assert P.fi_decompositions(17) == []
    assert P.fi_decompositions(4) == []
    assert [(d.k, d.l) for d in P.fi_decompositions(8)] == [(2, 2)]


def test_fi_decompositions_bruteforce():
    for n in range(1, 3000):
        expected = [
            (k, l)
            for l in range(2, math.isqrt(n) + 1)
            if P.is_prime_int(l)
            for k in [math.isqrt(n - l * l)]
            if k >= 1 and k * k + l * l == n
        ]
        got = [(d.k, d.l) for d in P.fi_decompositions(n)]
        assert got == expected, n


def test_is_fi_prime():
    assert P.is_fi_prime(5)
    assert not P.is_fi_prime(17)  # only 1 + 16, and 4 is not prime
    assert not P.is_fi_prime(3)
    assert P.is_fi_prime(13) and P.is_fi_prime(29)


def test_lambda_lambda_examples():
    assert P.lambda_lambda(13) == pytest.approx(
        math.log(13) * (math.log(3) + math.log(2)), rel=1e-14
    )
    assert P.lambda_lambda(6) == 0.0
    assert P.lambda_lambda(17) == 0.0
    # prime powers keep their exact von Mangoldt weight
    assert P.mangoldt(9) == pytest.approx(math.log(3), rel=1e-15)


def test_fi_primes_residue_class():
    # nonzero LL forces p = 1 (4) at primes
    fi = P.fi_primes_upto(10**5)
    assert np.all(fi % 4 == 1)
    assert list(fi[:8]) == [5, 13, 29, 41, 53, 61, 73, 89]


def test_weighted_count_pair_vs_n_iteration():
    x = 3 * 10**4
    brute = P.fi_weighted_count_bruteforce(x)
    pair = P.fi_weighted_count(x).value
    assert pair == pytest.approx(brute, abs=1e-8)


def test_weighted_count_includes_outer_prime_powers():
    # n = 8 = 2^3 = 2^2 + 2^2 carries Lambda(8) = log 2 with prime leg l = 2
    total = P.fi_weighted_count_bruteforce(10)
    expected = P.lambda_lambda(5) + P.lambda_lambda(8)
    assert total == pytest.approx(expected, rel=1e-14)
    assert P.lambda_lambda(8) == pytest.approx(math.log(2) ** 2, rel=1e-14)


def test_weighted_count_small():
    # contributions below 30 are exactly n in {5, 8, 13, 25, 29}
    expected = sum(P.lambda_lambda(n) for n in (5, 8, 13, 25, 29))
    assert P.fi_weighted_count_bruteforce(30) == pytest.approx(expected, rel=1e-14)


def test_weighted_count_trivial():
    with pytest.raises(ValueError):
        P.fi_weighted_count(1)


def test_lambda_lambda_table_matches_scalar():
    x = 2000
    table = P.lambda_lambda_table(x)
    for n in range(1, x + 1):
        assert table[n] == pytest.approx(P.lambda_lambda(n), abs=1e-12)


def test_mangoldt_scalar():
    assert P.mangoldt(1) == 0.0
    assert P.mangoldt(2) == pytest.approx(math.log(2))
    assert P.mangoldt(1024) == pytest.approx(math.log(2))
    assert P.mangoldt(60) == 0.0


def test_fi_cache_roundtrip(tmp_path):
    fresh = P.fi_primes_upto(500, cache_dir=tmp_path)
    assert (tmp_path / "fi-primes.txt").exists()
    again = P.fi_primes_upto(400, cache_dir=tmp_path)
    assert np.array_equal(again, fresh[fresh <= 400])
    header = (tmp_path / "fi-primes.txt").read_text().splitlines()[0]
    assert header == "fi-cache v1 500"


def test_fi_cache_regenerates_on_corruption(tmp_path):
    P.fi_primes_upto(300, cache_dir=tmp_path)
    path = tmp_path / "fi-primes.txt"
    path.write_text("fi-cache v1 300\n13\n5\n")  # out of order
    fixed = P.fi_primes_upto(300, cache_dir=tmp_path)
    assert list(fixed[:2]) == [5, 13]
    # file was rewritten in sorted form
    body = [int(t) for t in path.read_text().split()[3:]]
    assert body == sorted(body)


def test_fi_cache_extends_limit(tmp_path):
    P.fi_primes_upto(100, cache_dir=tmp_path)
    longer = P.fi_primes_upto(1000, cache_dir=tmp_path)
    assert longer[-1] > 100
    header = (tmp_path / "fi-primes.txt").read_text().splitlines()[0]
    assert header == "fi-cache v1 1000"
