#!/usr/bin/env python3
"""
Double-double arithmetic on numpy arrays.

A value is carried as an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
giving about 106 bits. Everything here is branch-free so the same code runs
on scalars and on whole arrays of phases at once. Used to reduce large
phases j*n^gamma mod 1 and to take floors of n^c without losing the digits
that matter.
"""

from typing import NamedTuple, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

_SPLITTER = 134217729.0  # 2^27 + 1


class DD(NamedTuple):
    hi: np.ndarray
    lo: np.ndarray

    def to_float(self) -> np.ndarray:
        return self.hi + self.lo


def as_dd(x: ArrayLike) -> DD:
    """Promote doubles (or integers below 2^53) to double-double."""
    hi = np.asarray(x, dtype=np.float64)
    return DD(hi, np.zeros_like(hi))


# ---------------------------------------------------------------------------
# Error-free transformations
# ---------------------------------------------------------------------------

def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    """Requires |a| >= |b|."""
    s = a + b
    return s, b - (s - a)


def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------

def add(x: DD, y: DD) -> DD:
    s, e = two_sum(x.hi, y.hi)
    t, f = two_sum(x.lo, y.lo)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return DD(*quick_two_sum(s, e))


def add_d(x: DD, d: ArrayLike) -> DD:
    s, e = two_sum(x.hi, d)
    e = e + x.lo
    return DD(*quick_two_sum(s, e))


def neg(x: DD) -> DD:
    return DD(-x.hi, -x.lo)


def sub(x: DD, y: DD) -> DD:
    return add(x, neg(y))


def mul(x: DD, y: DD) -> DD:
    p, e = two_prod(x.hi, y.hi)
    e = e + (x.hi * y.lo + x.lo * y.hi)
    return DD(*quick_two_sum(p, e))


def mul_d(x: DD, d: ArrayLike) -> DD:
    p, e = two_prod(x.hi, d)
    e = e + x.lo * d
    return DD(*quick_two_sum(p, e))


def div_d(x: DD, d: ArrayLike) -> DD:
    q1 = x.hi / d
    p, e = two_prod(q1, d)
    s, f = two_sum(x.hi, -p)
    f = f - e + x.lo
    q2 = (s + f) / d
    return DD(*quick_two_sum(q1, q2))


def ratio(num: int, den: int) -> DD:
    """num/den for integers below 2^53."""
    return div_d(as_dd(float(num)), float(den))


def ldexp(x: DD, k) -> DD:
    return DD(np.ldexp(x.hi, k), np.ldexp(x.lo, k))


# ---------------------------------------------------------------------------
# Elementary functions
# ---------------------------------------------------------------------------

LN2 = DD(np.float64(6.931471805599452862e-01), np.float64(2.319046813846299558e-17))

_EXP_SQUARINGS = 9
_EXP_TERMS = 9


def exp(x: DD) -> DD:
    # x = m ln2 + 512 r, |r| <= ln2 / 1024
    m = np.floor(x.hi / LN2.hi + 0.5)
    r = sub(x, mul_d(LN2, m))
    r = ldexp(r, -_EXP_SQUARINGS)

    s = r
    term = r
    for k in range(2, _EXP_TERMS + 1):
        term = div_d(mul(term, r), float(k))
        s = add(s, term)

    # expm1 doubling: (1 + s)^2 - 1 = 2s + s^2
    for _ in range(_EXP_SQUARINGS):
        s = add(mul_d(s, 2.0), mul(s, s))
    s = add_d(s, 1.0)
    return ldexp(s, m.astype(np.int64))


def log(x: DD) -> DD:
    """Natural log of a positive double-double; one Newton step from log(hi)."""
    y = as_dd(np.log(x.hi))
    t = mul(x, exp(neg(y)))
    return add(y, add_d(t, -1.0))


def power(base: ArrayLike, exponent: float) -> DD:
    """base**exponent for positive doubles base (exact integers included)."""
    return exp(mul_d(log(as_dd(base)), exponent))


# ---------------------------------------------------------------------------
# Integer / fractional parts
# ---------------------------------------------------------------------------

def frac(x: DD) -> np.ndarray:
    """Fractional part in [0, 1) as a double, absolute error ~1e-16."""
    fl = np.floor(x.hi)
    r = (x.hi - fl) + x.lo
    r = r - np.floor(r)
    return np.where(r >= 1.0, 0.0, r)


def floor(x: DD) -> np.ndarray:
    fl = np.floor(x.hi)
    return np.where(x.hi == fl, fl + np.floor(x.lo), fl)


def distance_to_integer(x: DD) -> np.ndarray:
    return np.abs((x.hi - np.rint(x.hi)) + x.lo)


def unit_phase(fraction: ArrayLike) -> np.ndarray:
    """e(t) = exp(2 pi i t) for t already reduced mod 1."""
    return np.exp(2j * np.pi * np.asarray(fraction, dtype=np.float64))


if __name__ == "__main__":
    y = power(np.array([10_000.0, 123_457.0]), 0.95)
    print("n^0.95 hi:", y.hi)
    print("n^0.95 lo:", y.lo)
    print("frac    :", frac(y))
