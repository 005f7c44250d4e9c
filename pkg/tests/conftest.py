import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

import eigenforms  # noqa: E402

FIXTURES = Path(__file__).resolve().parent / "fixtures"

# tau(1..30), from the q-expansion of Delta
TAU_30 = (
    1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920,
    534612, -370944, -577738, 401856, 1217160, 987136, -6905934, 2727432,
    10661420, -7109760, -4219488, -12830688, 18643272, 21288960, -25499225,
    13865712, -73279080, 24647168, 128406630, -29211840,
)


@pytest.fixture(scope="session")
def tau_small():
    """n_max = 2 * 10^4: enough for N = 10^4 sums and p^2 checks up to p = 141."""
    return eigenforms.compute_tau(20_000)


@pytest.fixture(scope="session")
def tau_ps():
    """Covers [n^c] for c = 1.05 and N = 10^4."""
    return eigenforms.compute_tau(16_000)


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    eigenforms._table_cache.clear()
    yield tmp_path
    eigenforms._table_cache.clear()


@pytest.fixture
def fixture_path():
    return FIXTURES / "tau_v1_n10.txt"
