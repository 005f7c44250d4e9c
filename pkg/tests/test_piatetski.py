import dataclasses

import mpmath
import numpy as np
import pytest

import arith
import config
import eigenforms
import piatetski
from eigenforms import CoefficientSequence
from errors import FloorAmbiguityError, InvalidArgumentError, OutOfRangeError
from piatetski import PSConfig


def test_config_validation():
    with pytest.raises(InvalidArgumentError, match="diagnostic"):
        PSConfig(c=1.0, N=100)
    with pytest.raises(InvalidArgumentError):
        PSConfig(c=1.1, N=100)
    with pytest.raises(InvalidArgumentError):
        PSConfig(c=1.05, N=0)
    assert PSConfig(c=1.05, N=10).gamma == pytest.approx(1 / 1.05)


def test_c_one_limit_gives_the_primes():
    cfg = PSConfig(c=1.0, N=100, diagnostic=True)
    records = piatetski.ps_enumerate(cfg)
    assert [r.n for r in records] == arith.primes_in(1, 100).as_list()
    assert all(r.n == r.p for r in records)


def test_floors_against_mpmath():
    ns = np.arange(1, 101)
    floors = piatetski.floor_power(ns, 1.05)
    with mpmath.workdps(40):
        expected = [int(mpmath.floor(mpmath.power(n, mpmath.mpf(1.05)))) for n in range(1, 101)]
    assert floors.tolist() == expected


def test_enumeration_against_brute_force():
    cfg = PSConfig(c=1.05, N=100)
    with mpmath.workdps(40):
        brute = [n for n in range(1, 101)
                 if arith.is_prime(int(mpmath.floor(mpmath.power(n, mpmath.mpf(1.05)))))]
    assert [r.n for r in piatetski.ps_enumerate(cfg)] == brute


def test_exact_powers():
    assert piatetski.floor_power(np.array([1, 3, 7]), 2.0).tolist() == [1, 9, 49]
    assert piatetski.ceil_power(np.array([1]), 0.5).tolist() == [1]
    with pytest.raises(FloorAmbiguityError):
        piatetski.floor_power(np.array([4]), 0.5)


def test_ceil_power_against_mpmath():
    ps = np.array([2, 3, 101, 9973])
    gamma = 1 / 1.05
    with mpmath.workdps(40):
        expected = [int(mpmath.ceil(mpmath.power(p, mpmath.mpf(gamma)))) for p in ps.tolist()]
    assert piatetski.ceil_power(ps, gamma).tolist() == expected


def test_hits_strictly_increasing():
    ns, ps = piatetski.ps_hits(PSConfig(c=1.08, N=5_000), workers=2)
    assert np.all(np.diff(ns) > 0)
    assert np.all(np.diff(ps) > 0)


def test_bracket_equivalence():
    cfg = PSConfig(c=1.05, N=10_000)
    records = piatetski.ps_enumerate(cfg)
    assert records
    assert all(r.bracket_ok(cfg.gamma) for r in records)


@pytest.mark.parametrize("c", [1.05, 1.08])
def test_counting_identity(c):
    cfg = PSConfig(c=c, N=10_000)
    report = piatetski.counting_identity_report(cfg)
    assert report.max_interior_discrepancy == 0
    assert report.interior_primes > 1000
    assert all(b.p > cfg.p_max - 10 for b in report.boundary)
    assert report.hits == len(piatetski.ps_enumerate(cfg))
    assert piatetski.counting_identity_check(cfg, workers=2) == 0


def test_counting_identity_across_blocks(monkeypatch):
    monkeypatch.setattr(config, "PS_BLOCK", 777)
    assert piatetski.counting_identity_check(PSConfig(c=1.07, N=5_000), workers=3) == 0


def test_sawtooth_values():
    assert piatetski.sawtooth(0.3) == pytest.approx(-0.7)
    assert piatetski.sawtooth(1.3) == pytest.approx(piatetski.sawtooth(0.3))
    assert piatetski.sawtooth(-0.25) == pytest.approx(-0.25)
    assert piatetski.sawtooth(2.0) == -1.0


def test_sawtooth_fourier_tail():
    x = np.linspace(0.01, 0.99, 197)
    J = 1_000
    err = np.abs(piatetski.sawtooth(x) - piatetski.sawtooth_fourier(x, J))
    assert np.all(err <= piatetski.sawtooth_tail_bound(x, J))
    with pytest.raises(InvalidArgumentError):
        piatetski.sawtooth_fourier(0.5, 0)


def test_weighted_prime_sum_with_unit_coefficients():
    cfg = PSConfig(c=1.05, N=10_000)
    result = piatetski.weighted_prime_sum_check(cfg, CoefficientSequence("unit"))
    assert result.lhs == len(piatetski.ps_enumerate(cfg))
    assert abs(result.diff_over_N) < 0.02
    assert result.diff == pytest.approx(result.lhs - result.main)


def test_lambda_square_report(tau_ps):
    cfg = PSConfig(c=1.05, N=10_000)
    report = piatetski.lambda_square_report(cfg, tau_ps)
    assert report.identity_terms > 0
    assert abs(report.identity_lhs - report.identity_rhs) < 1e-10
    assert report.main_term == pytest.approx(float(mpmath.li(10_000)) / 1.05)
    assert 0.7 <= report.ratio <= 1.3
    assert report.ratio == pytest.approx(piatetski.lambda_square_ratio(cfg, tau_ps))
    assert set(report.row()) == set(piatetski.PS_COLUMNS)


def test_lambda_square_grid_approaches_main_term(tau_ps):
    reports = piatetski.lambda_square_grid(1.05, [10_000, 1_000], tau_ps)
    assert [r.N for r in reports] == [1_000, 10_000]
    ok, deviations = piatetski.ratio_trend(reports)
    assert ok, deviations
    assert deviations[1] < deviations[0]
    assert reports[1].ratio == pytest.approx(piatetski.lambda_square_report(PSConfig(c=1.05, N=10_000), tau_ps).ratio)


def test_ratio_trend_flags_growth(tau_ps):
    reports = piatetski.lambda_square_grid(1.05, [1_000, 10_000], tau_ps)
    drifted = [reports[0], dataclasses.replace(reports[1], ratio=1.0 + 2 * abs(reports[0].ratio - 1.0))]
    ok, deviations = piatetski.ratio_trend(drifted)
    assert not ok
    assert deviations[1] > deviations[0]


@pytest.mark.parametrize("N", config.PS_GRID)
def test_unit_counting_error_within_envelope(N):
    result = piatetski.weighted_prime_sum_check(PSConfig(c=1.05, N=N), CoefficientSequence("unit"))
    assert abs(result.diff_over_N) <= piatetski.counting_error_envelope(N)


def test_lambda_square_needs_table():
    with pytest.raises(OutOfRangeError, match="n_max"):
        piatetski.lambda_square_ratio(PSConfig(c=1.05, N=10_000), eigenforms.compute_tau(1_000))


def test_sym2_pnt_ratio_is_small(tau_small):
    assert abs(piatetski.sym2_pnt_ratio(tau_small, 10_000)) < 1.0
    with pytest.raises(InvalidArgumentError):
        piatetski.sym2_pnt_ratio(tau_small, 2)


def test_sampled_j_profile(tau_small):
    rows = piatetski.sampled_j_profile(CoefficientSequence("hecke", tau_small), 1 / 1.05, 5_000,
                                       [1.0, 2.0, 3.0])
    assert [r["j"] for r in rows] == [1.0, 2.0, 3.0]
    assert all(r["n_terms"] == len(arith.primes_in(5_000, 10_000)) for r in rows)
