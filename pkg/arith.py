#!/usr/bin/env python3
"""
Elementary arithmetic shared by every other module: segmented prime sieve,
deterministic primality, factorization, totient and divisor counts.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterator, List, Tuple

import numpy as np

import config
from errors import InvalidArgumentError


@dataclass(frozen=True)
class PrimeRange:
    """The primes in (lo, hi], ascending."""
    lo: int
    hi: int
    primes: np.ndarray = field(repr=False, compare=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self.primes)

    def __contains__(self, n: int) -> bool:
        i = int(np.searchsorted(self.primes, n))
        return i < self.primes.size and int(self.primes[i]) == n

    def as_list(self) -> List[int]:
        return self.primes.tolist()


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: Tuple[Tuple[int, int], ...]

    def value(self) -> int:
        return multiply(self.factors)

    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]


# ---------------------------------------------------------------------------
# Sieving
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit (plain Eratosthenes, used for base primes)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p: limit + 1: p] = False
    primes = np.flatnonzero(is_prime).astype(np.int64)
    primes.flags.writeable = False
    return primes


def _sieve_segment(low: int, high: int, base: np.ndarray) -> np.ndarray:
    """Boolean mask for low <= n < high."""
    mask = np.ones(high - low, dtype=bool)
    for p in base.tolist():
        p2 = p * p
        if p2 >= high:
            break
        start = max(p2, ((low + p - 1) // p) * p)
        mask[start - low:: p] = False
    if low < 2:
        mask[: 2 - low] = False
    return mask


def _check_range(lo: int, hi: int) -> None:
    if lo < 0 or hi <= lo:
        raise InvalidArgumentError(f"need 0 <= lo < hi, got lo={lo}, hi={hi}")
    if hi > config.SIEVE_CEILING:
        raise InvalidArgumentError(
            f"hi={hi} exceeds the sieve ceiling {config.SIEVE_CEILING}")


def prime_indicator(lo: int, hi: int, workers: int = 1) -> np.ndarray:
    """Boolean array whose entry i says whether lo + 1 + i is prime."""
    _check_range(lo, hi)
    base = simple_sieve(math.isqrt(hi) + 1)
    segments = [(low, min(low + config.SIEVE_SEGMENT, hi + 1))
                for low in range(lo + 1, hi + 1, config.SIEVE_SEGMENT)]

    if workers > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(segments))) as executor:
            masks = list(executor.map(lambda s: _sieve_segment(s[0], s[1], base), segments))
    else:
        masks = [_sieve_segment(low, high, base) for low, high in segments]

    return np.concatenate(masks) if masks else np.zeros(0, dtype=bool)


def primes_in(lo: int, hi: int, workers: int = 1) -> PrimeRange:
    """Exactly the primes in (lo, hi], by a segmented sieve."""
    if lo < 1:
        raise InvalidArgumentError(f"lo must be >= 1, got {lo}")
    flags = prime_indicator(lo, hi, workers=workers)
    primes = (np.flatnonzero(flags) + (lo + 1)).astype(np.int64)
    primes.flags.writeable = False
    return PrimeRange(lo=lo, hi=hi, primes=primes)


# ---------------------------------------------------------------------------
# Primality and factorization
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2^64."""
    if n < 0 or n >= 1 << 64:
        raise InvalidArgumentError(f"primality only supported on [0, 2^64), got {n}")
    if n < 2:
        return False
    for p in config.MILLER_RABIN_WITNESSES:
        if n % p == 0:
            return n == p

    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    for a in config.MILLER_RABIN_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_TRIAL_LIMIT = 1 << 16


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of the odd composite n."""
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"no factor found for {n}")


def _split_large(n: int, out: List[int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out.append(n)
        return
    d = _pollard_brent(n)
    _split_large(d, out)
    _split_large(n // d, out)


def factorize(n: int) -> Factorization:
    """Canonical factorization; trial division then Pollard-Brent on the rest."""
    if n < 1:
        raise InvalidArgumentError(f"factorize needs n >= 1, got {n}")
    found: dict = {}
    m = n
    for p in simple_sieve(_TRIAL_LIMIT).tolist():
        if p * p > m:
            break
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    if m > 1:
        if m < _TRIAL_LIMIT * _TRIAL_LIMIT:
            found[m] = found.get(m, 0) + 1
        else:
            rest: List[int] = []
            _split_large(m, rest)
            for p in rest:
                found[p] = found.get(p, 0) + 1
    return Factorization(n=n, factors=tuple(sorted(found.items())))


def multiply(factors) -> int:
    return reduce(lambda acc, pe: acc * pe[0] ** pe[1], factors, 1)


def totient(q: int) -> int:
    if q < 1:
        raise InvalidArgumentError(f"totient needs q >= 1, got {q}")
    result = q
    for p, _ in factorize(q).factors:
        result -= result // p
    return result


def divisors(n: int) -> List[int]:
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def num_divisors(n: int) -> int:
    return reduce(lambda acc, pe: acc * (pe[1] + 1), factorize(n).factors, 1)


def divisor_counts(n_hi: int) -> np.ndarray:
    """d(n) for 0 <= n <= n_hi (entry 0 unused)."""
    counts = np.zeros(n_hi + 1, dtype=np.int64)
    for d in range(1, n_hi + 1):
        counts[d::d] += 1
    return counts


gcd = math.gcd


if __name__ == "__main__":
    print("primes in (1, 50]:", primes_in(1, 50).as_list())
    print("pi(10^6) =", len(primes_in(1, 10**6)))
    print("factorize(2^20 * 3) =", factorize(2**20 * 3).factors)
    print("phi(10^4) =", totient(10**4))
