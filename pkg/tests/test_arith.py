import math
import random

import numpy as np
import pytest

import arith
import config
from errors import InvalidArgumentError


def brute_primes(lo, hi):
    return [n for n in range(max(lo + 1, 2), hi + 1) if all(n % d for d in range(2, math.isqrt(n) + 1))]


def test_primes_in_small_range():
    assert arith.primes_in(1, 50).as_list() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def test_primes_in_is_half_open():
    primes = arith.primes_in(7, 13)
    assert primes.as_list() == [11, 13]
    assert 7 not in primes
    assert 13 in primes


def test_pi_of_ten_to_the_six():
    assert len(arith.primes_in(1, 10**6)) == 78498


def test_segmented_sieve_across_segment_boundary(monkeypatch):
    monkeypatch.setattr(config, "SIEVE_SEGMENT", 97)
    assert arith.primes_in(900, 1400, workers=3).as_list() == brute_primes(900, 1400)


def test_prime_indicator_offsets():
    flags = arith.prime_indicator(10, 20)
    assert flags.shape == (10,)
    assert (np.flatnonzero(flags) + 11).tolist() == [11, 13, 17, 19]


def test_sieve_rejects_bad_ranges():
    with pytest.raises(InvalidArgumentError):
        arith.primes_in(10, 10)
    with pytest.raises(InvalidArgumentError):
        arith.primes_in(0, 5)
    with pytest.raises(InvalidArgumentError):
        arith.prime_indicator(1, config.SIEVE_CEILING + 1)


def test_is_prime_matches_sieve():
    primes = set(arith.primes_in(1, 20_000).as_list())
    assert all(arith.is_prime(n) == (n in primes) for n in range(20_001))


def test_is_prime_large_values():
    assert arith.is_prime(2**61 - 1)
    assert not arith.is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not arith.is_prime((2**31 - 1) * (2**31 + 11))
    with pytest.raises(InvalidArgumentError):
        arith.is_prime(2**64)


@pytest.mark.parametrize("n", [1, 2, 360, 2**20 * 3, 999983 * 1000003, 600851475143])
def test_factorize_roundtrip(n):
    fac = arith.factorize(n)
    assert fac.value() == n
    assert all(arith.is_prime(p) for p in fac.primes())


def test_factorize_random_semiprimes():
    rng = random.Random(7)
    for _ in range(20):
        p, q = (rng.choice(arith.primes_in(10**8, 10**8 + 2000).as_list()) for _ in range(2))
        assert arith.multiply(arith.factorize(p * q).factors) == p * q


def test_totient_and_divisors():
    assert arith.totient(1) == 1
    assert arith.totient(12) == 4
    assert arith.totient(97) == 96
    assert arith.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert arith.num_divisors(720) == 30
    counts = arith.divisor_counts(100)
    assert all(counts[n] == arith.num_divisors(n) for n in range(1, 101))
