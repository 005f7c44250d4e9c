#!/usr/bin/env python3
"""
Dirichlet characters mod q as full value tables, Gauss sums, and the
finite identity that writes e(nl/q) as a combination of characters.

Characters are built from the cyclic factors of (Z/qZ)^x: one per odd
prime power (generated by a primitive root) and up to two for the power of
two (-1 and 5). A character is the exponent vector on those generators;
its values come from one table of roots of unity of order L = exponent of
the group, indexed by integer phases, so no value is produced by repeated
multiplication.
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

import arith
import config
from errors import InvalidArgumentError, NoSolutionError, PreconditionError


@dataclass(frozen=True)
class CyclicFactor:
    """One cyclic factor of (Z/qZ)^x, seen through the prime power modulus."""
    modulus: int
    order: int
    generator: int
    logs: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    index: Tuple[int, ...]
    exponent: int
    conductor: int
    phases: np.ndarray = field(repr=False, compare=False)
    values: np.ndarray = field(repr=False, compare=False)

    @property
    def is_principal(self) -> bool:
        return not any(self.index)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    def order(self) -> int:
        units = self.phases[self.phases >= 0]
        g = self.exponent
        for ph in np.unique(units).tolist():
            g = math.gcd(g, ph)
        return self.exponent // g


@dataclass(frozen=True)
class GaussSum:
    character: DirichletCharacter
    value: complex


# ---------------------------------------------------------------------------
# Group structure
# ---------------------------------------------------------------------------

def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the odd prime p."""
    if p == 2:
        return 1
    radicals = [r for r, _ in arith.factorize(p - 1).factors]
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in radicals):
            return g
    raise NoSolutionError(f"no primitive root mod {p}")


def discrete_log(a: int, g: int, modulus: int, order: int) -> int:
    """k with g^k = a (mod modulus), 0 <= k < order, by baby-step/giant-step."""
    a %= modulus
    m = math.isqrt(order - 1) + 1 if order > 1 else 1
    baby = {}
    x = 1
    for j in range(m):
        baby.setdefault(x, j)
        x = x * g % modulus
    step = pow(g, -m, modulus)
    gamma = a
    for i in range(m + 1):
        j = baby.get(gamma)
        if j is not None:
            k = i * m + j
            if k < order:
                return k
        gamma = gamma * step % modulus
    raise NoSolutionError(f"{a} is not a power of {g} mod {modulus}")


def _power_table(g: int, modulus: int, order: int, signed: bool = False) -> np.ndarray:
    logs = np.full(modulus, -1, dtype=np.int64)
    x = 1
    for k in range(order):
        logs[x] = k
        if signed:
            logs[(-x) % modulus] = k
        x = x * g % modulus
    return logs


@lru_cache(maxsize=256)
def cyclic_factors(q: int) -> Tuple[CyclicFactor, ...]:
    factors: List[CyclicFactor] = []
    for p, e in arith.factorize(q).factors:
        m = p ** e
        if p == 2:
            if e == 1:
                continue
            sign = np.full(m, -1, dtype=np.int64)
            sign[1::4] = 0
            sign[3::4] = 1
            factors.append(CyclicFactor(modulus=m, order=2, generator=m - 1, logs=sign))
            if e >= 3:
                order = m // 4
                factors.append(CyclicFactor(modulus=m, order=order, generator=5,
                                            logs=_power_table(5, m, order, signed=True)))
            continue
        g = primitive_root(p)
        if e >= 2 and pow(g, p - 1, p * p) == 1:
            g += p
        order = m - m // p
        factors.append(CyclicFactor(modulus=m, order=order, generator=g,
                                    logs=_power_table(g, m, order)))
    return tuple(factors)


def _log_matrix(q: int, factors: Sequence[CyclicFactor]) -> Tuple[np.ndarray, np.ndarray]:
    residues = np.arange(q, dtype=np.int64)
    units = np.gcd(residues, q) == 1
    if not factors:
        return np.zeros((0, q), dtype=np.int64), units
    logs = np.stack([f.logs[residues % f.modulus] for f in factors])
    return logs, units


@lru_cache(maxsize=64)
def _roots_of_unity(order: int) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(order, dtype=np.float64) / order)
    roots.flags.writeable = False
    return roots


def _conductor(q: int, phases: np.ndarray, units: np.ndarray) -> int:
    residues = np.arange(q)
    trivial = units & (phases == 0)
    for d in arith.divisors(q):
        kernel = units & (residues % d == 1 % d)
        if np.all(trivial[kernel]):
            return d
    return q


def _make_character(q: int, index: Tuple[int, ...], factors: Sequence[CyclicFactor],
                    logs: np.ndarray, units: np.ndarray, exponent: int) -> DirichletCharacter:
    weights = np.array([a * (exponent // f.order) for a, f in zip(index, factors)], dtype=np.int64)
    phases = (weights @ logs) % exponent if len(factors) else np.zeros(q, dtype=np.int64)
    phases = np.where(units, phases, -1)
    values = np.where(units, _roots_of_unity(exponent)[np.maximum(phases, 0)], 0j)
    phases.flags.writeable = False
    values.flags.writeable = False
    return DirichletCharacter(modulus=q, index=tuple(index), exponent=exponent,
                              conductor=_conductor(q, phases, units),
                              phases=phases, values=values)


def iter_characters(q: int) -> Iterator[DirichletCharacter]:
    """All characters mod q, principal first."""
    if q < 1:
        raise InvalidArgumentError(f"modulus must be >= 1, got {q}")
    if q > config.CHARACTER_MODULUS_CEILING:
        raise InvalidArgumentError(
            f"modulus {q} exceeds the table ceiling {config.CHARACTER_MODULUS_CEILING}")
    factors = cyclic_factors(q)
    logs, units = _log_matrix(q, factors)
    exponent = 1
    for f in factors:
        exponent = exponent * f.order // math.gcd(exponent, f.order)
    for index in itertools.product(*[range(f.order) for f in factors]):
        yield _make_character(q, index, factors, logs, units, exponent)


@lru_cache(maxsize=128)
def all_characters(q: int) -> Tuple[DirichletCharacter, ...]:
    return tuple(iter_characters(q))


def chi_at(q: int, index: Sequence[int], n: int) -> complex:
    """Evaluate the character with the given index at n without building tables."""
    if math.gcd(n, q) != 1:
        return 0j
    factors = cyclic_factors(q)
    total = 0.0
    for a, f in zip(index, factors):
        if f.modulus % 2 == 0 and f.generator == f.modulus - 1:
            k = 0 if n % 4 == 1 else 1
        elif f.order <= config.DLOG_TABLE_LIMIT:
            k = int(f.logs[n % f.modulus])
        else:
            x = n % f.modulus
            if f.modulus % 2 == 0 and x % 4 == 3:
                x = (-x) % f.modulus
            k = discrete_log(x, f.generator, f.modulus, f.order)
        total += a * k / f.order
    frac = total - math.floor(total)
    return complex(np.exp(2j * np.pi * frac))


def conjugate(chi: DirichletCharacter) -> DirichletCharacter:
    factors = cyclic_factors(chi.modulus)
    index = tuple((-a) % f.order for a, f in zip(chi.index, factors))
    for other in all_characters(chi.modulus):
        if other.index == index:
            return other
    raise NoSolutionError(f"conjugate of {chi.index} mod {chi.modulus} not found")


def character_product(chi: DirichletCharacter, psi: DirichletCharacter) -> DirichletCharacter:
    if chi.modulus != psi.modulus:
        raise InvalidArgumentError("characters must share a modulus")
    factors = cyclic_factors(chi.modulus)
    index = tuple((a + b) % f.order for a, b, f in zip(chi.index, psi.index, factors))
    for other in all_characters(chi.modulus):
        if other.index == index:
            return other
    raise NoSolutionError(f"product character {index} mod {chi.modulus} not found")


def orthogonality_sum(q: int, m: int, n: int) -> complex:
    """(1/phi(q)) sum_chi chi(m) conj(chi(n)); 1 when m = n coprime to q, else 0."""
    total = sum(chi(m) * chi(n).conjugate() for chi in all_characters(q))
    return total / arith.totient(q)


# ---------------------------------------------------------------------------
# Gauss sums and the additive decomposition
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _additive_table(q: int) -> np.ndarray:
    table = np.exp(2j * np.pi * np.arange(q, dtype=np.float64) / q)
    table.flags.writeable = False
    return table


def gauss_sum(chi: DirichletCharacter) -> GaussSum:
    """sum over a mod q of chi(a) e(a/q), by direct summation."""
    value = complex(np.sum(chi.values * _additive_table(chi.modulus)))
    return GaussSum(character=chi, value=value)


@lru_cache(maxsize=128)
def _decomposition_weights(q: int) -> Tuple[Tuple[DirichletCharacter, complex], ...]:
    """Each chi mod q paired with tau(conj chi)."""
    return tuple((chi, gauss_sum(conjugate(chi)).value) for chi in all_characters(q))


def additive_decomposition(n: int, l: int, q: int) -> Tuple[complex, complex]:
    """(e(nl/q), (1/phi(q)) sum_chi chi(l) tau(conj chi) chi(n))."""
    if q < 1:
        raise InvalidArgumentError(f"modulus must be >= 1, got {q}")
    if math.gcd(n * l, q) != 1:
        raise PreconditionError(f"gcd({n}*{l}, {q}) != 1")
    direct = complex(np.exp(2j * np.pi * ((n * l) % q) / q))
    total = sum(chi(l) * tau_bar * chi(n) for chi, tau_bar in _decomposition_weights(q))
    return direct, total / arith.totient(q)


def decomposition_error(q: int) -> float:
    """max over units n, l mod q of |e(nl/q) - (1/phi(q)) sum_chi chi(l) tau(conj chi) chi(n)|."""
    pairs = _decomposition_weights(q)
    values = np.stack([chi.values for chi, _ in pairs])
    tau_bar = np.array([t for _, t in pairs])
    combined = (values.T * tau_bar) @ values / arith.totient(q)
    residues = np.arange(q)
    units = np.flatnonzero(np.gcd(residues, q) == 1)
    direct = np.exp(2j * np.pi * (np.outer(units, units) % q) / q)
    return float(np.max(np.abs(combined[np.ix_(units, units)] - direct)))


def gcd_split_check(coeffs: Sequence[float], l: int, q: int,
                    s: complex = 0.0) -> Tuple[complex, complex]:
    """
    The Dirichlet polynomial sum_n c_n e(nl/q) n^{-s} (c_n = coeffs[n-1])
    evaluated directly and through the split over d | q into characters
    mod q/d acting on the coefficients c_{dn}.
    """
    if math.gcd(l, q) != 1:
        raise PreconditionError(f"gcd({l}, {q}) != 1")
    c = np.asarray(coeffs, dtype=np.complex128)
    size = c.size
    ns = np.arange(1, size + 1, dtype=np.float64)
    twist = np.exp(2j * np.pi * ((np.arange(1, size + 1) * l) % q) / q)
    direct = complex(np.sum(c * twist * ns ** (-s)))

    split = 0j
    for d in arith.divisors(q):
        qd = q // d
        sub = c[d - 1::d]
        if sub.size == 0:
            continue
        ms = np.arange(1, sub.size + 1)
        weights = sub * ms.astype(np.float64) ** (-s)
        inner = 0j
        for chi, tau_bar in _decomposition_weights(qd):
            inner += chi(l) * tau_bar * complex(np.sum(weights * chi.values[ms % qd]))
        split += d ** (-s) * inner / arith.totient(qd)
    return direct, split


if __name__ == "__main__":
    for chi in all_characters(12):
        g = gauss_sum(chi)
        print(chi.index, "conductor", chi.conductor, "tau =", np.round(g.value, 6))
    print(additive_decomposition(7, 5, 12))
