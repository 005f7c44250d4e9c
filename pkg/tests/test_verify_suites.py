import pytest

import config
import verify_suites
from errors import InvalidArgumentError


def check(result, name):
    return next(c for c in result.checks if c.name == name)


def test_identities_suite(tau_small):
    result = verify_suites.identities_suite(tau_small, pairs=500, q_decomposition=20, q_gauss=40)
    assert result.passed, result.rows()
    assert {c.name for c in result.checks} >= {"hecke_square_exact", "multiplicativity", "deligne",
                                                "gauss_sum_modulus"}


def test_farey_suite(tau_small):
    result = verify_suites.farey_suite(tau_small, N=2_000, requests=5, workers=2)
    assert result.passed, result.rows()
    assert check(result, "regrouping").value <= 1e-9


@pytest.mark.slow
def test_farey_suite_regrouping_fifty_requests(tau_small):
    result = verify_suites.farey_suite(tau_small, N=10_000, requests=50)
    regrouping = check(result, "regrouping")
    assert regrouping.value <= 1e-9, regrouping.detail
    assert regrouping.detail == "50 random requests, N' <= 10000"


def test_oscillatory_suite_without_perron():
    result = verify_suites.oscillatory_suite(None, battery=10, perron=False)
    assert result.passed, result.rows()
    assert [c.name for c in result.checks] == ["vdc_k1", "vdc_k2", "vdc_k3", "arc_integral"]


def test_bounds_suite_unit_only():
    result = verify_suites.bounds_suite(None)
    ceiling = check(result, "ceiling")
    assert ceiling.limit == config.BOUND_RATIO_CEILING
    assert ceiling.passed
    assert len(verify_suites.bounds_rows(None)) == 16


def _bound_rows(per_N):
    return [{"N": N, "bound_ratio": ratio} for N, ratio in per_N]


def test_bounds_no_growth_compares_every_step(monkeypatch):
    # endpoints fall while the middle point rises
    rows = _bound_rows([(1_000, 2.0), (10_000, 2.5), (100_000, 1.5), (100_000, None)])
    monkeypatch.setattr(verify_suites, "bounds_rows", lambda *a, **k: rows)
    no_growth = check(verify_suites.bounds_suite(None, "full"), "no_growth")
    assert not no_growth.passed
    assert no_growth.value == 1


def test_bounds_no_growth_has_no_slack(monkeypatch):
    rows = _bound_rows([(1_000, 2.0), (10_000, 2.1)])
    monkeypatch.setattr(verify_suites, "bounds_rows", lambda *a, **k: rows)
    assert not check(verify_suites.bounds_suite(None), "no_growth").passed
    rows[1]["bound_ratio"] = 2.0
    assert check(verify_suites.bounds_suite(None), "no_growth").passed


def test_ps_suite(tau_ps):
    result = verify_suites.ps_suite(tau_ps, c=1.05, N=10_000)
    assert result.passed, result.rows()
    assert check(result, "lambda_square_routes").value <= 1e-10
    trend = check(result, "lambda_square_trend")
    assert trend.passed and trend.value < trend.limit, trend.detail
    assert trend.detail.startswith("N=1000: ")
    envelope = check(result, "counting_error_envelope")
    assert envelope.value <= 1.0
    assert "N=1000" in envelope.detail and "N=10000" in envelope.detail


def test_rows_carry_suite_name(tau_ps):
    rows = verify_suites.ps_suite(None, N=1_000).rows()
    assert rows and all(r["suite"] == "ps" for r in rows)
    assert set(rows[0]) == set(verify_suites.CHECK_COLUMNS)


def test_required_n_max():
    assert verify_suites.required_n_max("farey", N=5_000) == 5_000
    assert verify_suites.required_n_max("bounds", grid="full") == 200_000
    assert verify_suites.required_n_max("ps", N=10_000, c=1.05) > 15_000


def test_unknown_suite():
    with pytest.raises(InvalidArgumentError):
        verify_suites.run_suite("nonsense", None)
    with pytest.raises(InvalidArgumentError):
        verify_suites.required_n_max("nonsense")
