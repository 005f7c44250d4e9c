import math
import random
import zlib

import numpy as np
import pytest

import arith
import config
import eigenforms
from conftest import TAU_30
from eigenforms import CoefficientSequence, TauTable
from errors import CacheFormatError, InvalidArgumentError, OutOfRangeError, ResourceLimitError


def brute_tau(n_max):
    """q prod (1 - q^k)^24 by repeated multiplication with Python integers."""
    series = [1] + [0] * (n_max - 1)
    for k in range(1, n_max):
        for _ in range(24):
            for i in range(n_max - 1, k - 1, -1):
                series[i] -= series[i - k]
    return series


def test_first_thirty_values():
    assert eigenforms.compute_tau(30).tau == TAU_30


def test_matches_brute_force_series():
    assert list(eigenforms.compute_tau(120).tau) == brute_tau(120)


def test_tau_100_from_multiplicativity():
    t = eigenforms.compute_tau(100)
    assert t[100] == t[4] * t[25] == 37534859200


def test_hecke_relation_at_primes(tau_small):
    for p in arith.primes_in(1, math.isqrt(tau_small.n_max)):
        assert tau_small[p] ** 2 - tau_small[p * p] == p ** 11


def test_multiplicativity_on_random_pairs(tau_small):
    rng = random.Random(3)
    checked = 0
    while checked < 2000:
        m, n = rng.randint(1, 140), rng.randint(1, 140)
        if math.gcd(m, n) == 1:
            assert tau_small[m * n] == tau_small[m] * tau_small[n]
            checked += 1


def test_deligne_bound(tau_small):
    primes = arith.primes_in(1, tau_small.n_max).primes
    assert np.all(np.abs(tau_small.lambdas[primes - 1]) <= 2.0)


def test_lambda_square_identity(tau_small):
    for p in [2, 3, 5, 7, 11, 97, 139]:
        lhs, rhs = eigenforms.lambda_square_identity(tau_small, p)
        assert abs(lhs - rhs) < 1e-10


def test_lambda_square_identity_needs_p_squared(tau_small):
    with pytest.raises(OutOfRangeError):
        eigenforms.lambda_square_identity(tau_small, 149)
    with pytest.raises(InvalidArgumentError):
        eigenforms.lambda_square_identity(tau_small, 4)


def test_hecke_lambda_bounds(tau_small):
    assert eigenforms.hecke_lambda(tau_small, 1) == 1.0
    with pytest.raises(OutOfRangeError):
        eigenforms.hecke_lambda(tau_small, tau_small.n_max + 1)


def test_satake_reconstruction(tau_small):
    for p in [2, 3, 5, 7]:
        angle = eigenforms.satake_angle(tau_small, p)
        assert abs(abs(angle.alpha) - 1.0) < 1e-14
        for k in range(1, 5):
            expected = eigenforms.lambda_extended(tau_small, p ** k)
            assert abs(eigenforms.hecke_from_satake(angle, k) - expected) < 1e-10
        assert abs(eigenforms.euler_log_coeffs(angle, 1).real - eigenforms.hecke_lambda(tau_small, p)) < 1e-14


def test_tau_extended_beyond_table():
    t = eigenforms.compute_tau(30)
    assert eigenforms.tau_extended(t, 32) == eigenforms.compute_tau(32)[32]
    assert eigenforms.tau_extended(t, 2 * 29 * 29) == t[2] * eigenforms.tau_prime_power(t[29], 29, 2)
    with pytest.raises(OutOfRangeError):
        eigenforms.tau_extended(t, 31 * 2)


def test_sym2_euler_product(tau_small):
    for p in [2, 3, 5]:
        for k in range(1, 4):
            series, coefficient = eigenforms.sym2_euler_check(tau_small, p, k)
            assert abs(series - coefficient) < 1e-9


def test_sym2_at_primes_agrees_with_hecke_square(tau_small):
    seq = CoefficientSequence("sym2-full", tau_small)
    square = CoefficientSequence("hecke-square-at-primes", tau_small)
    for p in [2, 3, 101, 139]:
        assert abs(seq(p) - square(p)) < 1e-12
        assert abs(square(p) - eigenforms.hecke_lambda(tau_small, p * p)) < 1e-12


def test_hecke_square_beyond_p_squared_uses_hecke_relation(tau_small):
    p = 10007
    lam = eigenforms.hecke_lambda(tau_small, p)
    value = CoefficientSequence("hecke-square-at-primes", tau_small)(p)
    assert abs(value - (lam * lam - 1.0)) < 1e-12


def test_coefficient_sequence_kinds(tau_small):
    ns = np.arange(1, 50)
    assert np.all(CoefficientSequence("unit").at(ns) == 1.0)
    hecke = CoefficientSequence("hecke", tau_small).at(ns)
    assert np.allclose(hecke, [tau_small[n] / n ** 5.5 for n in ns.tolist()], rtol=1e-15)
    squares = CoefficientSequence("hecke-square-at-primes", tau_small).at(ns)
    assert squares[3] == 0.0 and squares[0] == 1.0 and squares[1] != 0.0


def test_coefficient_out_of_range_names_n_max():
    seq = CoefficientSequence("hecke", eigenforms.compute_tau(30))
    with pytest.raises(OutOfRangeError, match="n_max >= 31"):
        seq.values(10, 31)
    with pytest.raises(InvalidArgumentError):
        CoefficientSequence("zeta")
    with pytest.raises(InvalidArgumentError):
        CoefficientSequence("hecke")


def test_ramanujan_surrogate(tau_small):
    assert eigenforms.ramanujan_surrogate_ok(CoefficientSequence("hecke", tau_small), 5000)
    assert eigenforms.ramanujan_surrogate_ok(CoefficientSequence("sym2-full", tau_small), 300)


def test_ceiling(monkeypatch):
    monkeypatch.setattr(config, "TAU_CEILING", 100)
    with pytest.raises(ResourceLimitError):
        eigenforms.compute_tau(101)


# ---------------------------------------------------------------------------
# Cache
# ---------------------------------------------------------------------------

def test_fixture_loads(fixture_path):
    table = eigenforms.load_table(fixture_path)
    assert table.tau == TAU_30[:10]


def test_save_matches_fixture(tmp_path, fixture_path):
    path = tmp_path / "tau.cache"
    eigenforms.save_table(TauTable(n_max=10, tau=TAU_30[:10]), path)
    assert path.read_bytes() == fixture_path.read_bytes()


def test_corrupt_cache_reports_line(tmp_path, fixture_path):
    path = tmp_path / "tau.cache"
    text = fixture_path.read_text().replace("4830", "4831")
    path.write_text(text)
    with pytest.raises(CacheFormatError) as info:
        eigenforms.load_table(path)
    assert info.value.line == 12
    assert str(path) in str(info.value)


def test_non_integer_line_is_located(tmp_path):
    path = tmp_path / "tau.cache"
    eigenforms.save_table(TauTable(n_max=3, tau=(1, -24, 252)), path)
    raw = path.read_bytes().replace(b"-24", b"x24")
    body = raw[:raw.rfind(b"CRC32 ")]
    path.write_bytes(body + f"CRC32 {zlib.crc32(body):08x}\n".encode())
    with pytest.raises(CacheFormatError) as info:
        eigenforms.load_table(path)
    assert info.value.line == 3


def test_cached_table_hit_miss_rebuild(cache_dir):
    table, status = eigenforms.cached_tau_table(50, cache_dir)
    assert status == "miss" and table[50] == eigenforms.compute_tau(50)[50]
    eigenforms._table_cache.clear()
    _, status = eigenforms.cached_tau_table(40, cache_dir)
    assert status == "hit"

    eigenforms._table_cache.clear()
    eigenforms.cache_path(cache_dir).write_text("garbage\n")
    with pytest.raises(CacheFormatError):
        eigenforms.cached_tau_table(40, cache_dir)
    table, status = eigenforms.cached_tau_table(40, cache_dir, force=True)
    assert status == "rebuilt" and table.n_max == 40


def test_load_cached_table_hint(cache_dir):
    with pytest.raises(FileNotFoundError, match="tau --n-max 500"):
        eigenforms.load_cached_table(500, cache_dir)
    eigenforms.cached_tau_table(20, cache_dir)
    with pytest.raises(OutOfRangeError):
        eigenforms.load_cached_table(500, cache_dir)
