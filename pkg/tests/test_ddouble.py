import mpmath
import numpy as np

import ddouble


def mp_frac_power(n, e):
    with mpmath.workdps(40):
        v = mpmath.power(mpmath.mpf(n), mpmath.mpf(e))
        return float(v - mpmath.floor(v))


def test_two_prod_is_exact():
    a, b = np.float64(0.1), np.float64(3.0) ** 20
    p, e = ddouble.two_prod(a, b)
    with mpmath.workdps(60):
        assert mpmath.mpf(float(p)) + mpmath.mpf(float(e)) == mpmath.mpf(float(a)) * mpmath.mpf(float(b))


def test_log_exp_roundtrip():
    x = ddouble.as_dd(np.array([1.5, 10_000.0, 123_456_789.0]))
    back = ddouble.exp(ddouble.log(x))
    assert np.all(np.abs((back.hi - x.hi) + back.lo) <= 1e-26 * x.hi)


def test_power_fractional_part_at_large_phase():
    ns = np.array([10_000, 123_457, 999_983, 2_000_000], dtype=np.float64)
    fracs = ddouble.frac(ddouble.power(ns, 1.45))
    expected = np.array([mp_frac_power(int(n), 1.45) for n in ns])
    assert np.max(np.abs(fracs - expected)) < 1e-12


def test_ratio_times_denominator_is_integral():
    third = ddouble.ratio(1, 3)
    assert ddouble.distance_to_integer(ddouble.mul_d(third, 3.0e9)) < 1e-12


def test_floor_and_distance():
    x = ddouble.DD(np.array([5.0, 5.0]), np.array([-1e-20, 1e-20]))
    assert ddouble.floor(x).tolist() == [4.0, 5.0]
    assert np.all(ddouble.distance_to_integer(x) < 1e-19)
