#!/usr/bin/env python3
"""
The batteries behind `hecke_sums.py verify <suite>`.

Each suite returns a SuiteResult of named checks; a suite passes when every
check does. Suites share nothing but the tau table handed in, so they can
run in any order.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

import amplitude
import arith
import characters
import config
import eigenforms
import expsum
import farey
import oscillatory
import piatetski
from amplitude import PowerAmplitude
from eigenforms import CoefficientSequence, TauTable
from errors import DegeneratePhaseError, InvalidArgumentError

SUITES = ("identities", "farey", "oscillatory", "bounds", "ps")

CHECK_COLUMNS = ["suite", "check", "passed", "value", "limit", "detail"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, value: float, limit: float, passed: Optional[bool] = None,
            detail: str = "") -> None:
        ok = value <= limit if passed is None else passed
        self.checks.append(CheckResult(name=name, passed=bool(ok), value=float(value),
                                       limit=float(limit), detail=detail))

    def rows(self) -> List[Dict]:
        return [{"suite": self.name, "check": c.name, "passed": c.passed, "value": c.value,
                 "limit": c.limit, "detail": c.detail} for c in self.checks]


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

def _random_coprime_pairs(rng: np.random.Generator, n_max: int, count: int):
    pairs = []
    hi = max(2, math.isqrt(n_max))
    while len(pairs) < count:
        m, n = (int(v) for v in rng.integers(1, hi + 1, size=2))
        if math.gcd(m, n) == 1 and m * n <= n_max:
            pairs.append((m, n))
    return pairs


def identities_suite(table: TauTable, seed: int = 0, pairs: int = 10_000,
                     q_decomposition: int = 60, q_gauss: int = 200) -> SuiteResult:
    suite = SuiteResult("identities")
    rng = np.random.default_rng(seed)

    primes = [p for p in arith.primes_in(1, 1000).as_list() if p * p <= table.n_max]
    bad = [p for p in primes if table[p] ** 2 - table[p * p] != p ** 11]
    suite.add("hecke_square_exact", len(bad), 0, detail=f"{len(primes)} primes; failures {bad[:5]}")

    worst = 0.0
    for p in primes:
        lhs, rhs = eigenforms.lambda_square_identity(table, p)
        worst = max(worst, abs(lhs - rhs))
    suite.add("lambda_square_identity", worst, 1e-10)

    broken = [(m, n) for m, n in _random_coprime_pairs(rng, table.n_max, pairs)
              if table[m * n] != table[m] * table[n]]
    suite.add("multiplicativity", len(broken), 0, detail=f"{pairs} coprime pairs")

    small = arith.primes_in(1, table.n_max).primes
    suite.add("deligne", float(np.max(np.abs(table.lambdas[small - 1]))) if small.size else 0.0, 2.0)

    decomposition = max(characters.decomposition_error(q) for q in range(1, q_decomposition + 1))
    suite.add("character_decomposition", decomposition, 1e-10, detail=f"q <= {q_decomposition}")

    gauss_worst = 0.0
    for q in range(1, q_gauss + 1):
        for chi in characters.all_characters(q):
            if chi.is_primitive:
                gauss_worst = max(gauss_worst, abs(abs(characters.gauss_sum(chi).value) - math.sqrt(q)))
    suite.add("gauss_sum_modulus", gauss_worst, 1e-9, detail=f"primitive characters, q <= {q_gauss}")
    return suite


# ---------------------------------------------------------------------------
# farey
# ---------------------------------------------------------------------------

def random_requests(rng: np.random.Generator, count: int, n_hi: int,
                    table: Optional[TauTable]) -> List[expsum.SumRequest]:
    """Admissible requests with N' <= n_hi for the regrouping battery."""
    requests = []
    while len(requests) < count:
        N = int(rng.integers(200, n_hi // 2 + 1))
        N_prime = int(rng.integers(N + 1, min(2 * N, n_hi) + 1))
        f = PowerAmplitude(j=float(rng.choice([-3.0, -2.0, -1.0, 1.0, 2.0, 3.0])),
                           gamma=float(rng.uniform(0.9, 0.99)))
        kind = "hecke" if table is not None and rng.random() < 0.5 else "unit"
        coeff = CoefficientSequence(kind, table if kind == "hecke" else None)
        requests.append(expsum.SumRequest(coeff=coeff, f=f, N=N, N_prime=N_prime,
                                          prime_only=bool(rng.random() < 0.3)))
    return requests


def dissection_windows(f: PowerAmplitude, N: int, N_prime: int, Q: float,
                       workers: int = 1) -> Dict[str, float]:
    """Worst M, m and owner statistics over the interior arcs of one dissection."""
    intervals = farey.dissect_and_project(f, N, N_prime, Q, workers=workers)
    farey.partition_check(intervals, N, N_prime)
    interior = [iv for iv in intervals if not iv.arc.clipped]
    M = [v for iv in interior for v in (iv.arc.M1, iv.arc.M2)]
    m = [v for iv in interior for v in farey.m_normalized(iv, f, N)]
    owners = [farey.owner_ratio(iv.arc, f, N) for iv in interior]
    return {
        "arcs": len(intervals),
        "interior": len(interior),
        "M_min": min(M, default=0.5),
        "M_max": max(M, default=1.0),
        "m_max": max(m, default=0.0),
        "owner_min": min(owners, default=config.OWNER_WINDOW[0]),
        "owner_max": max(owners, default=config.OWNER_WINDOW[1]),
    }


def farey_suite(table: Optional[TauTable], N: int = 10_000, seed: int = 0,
                requests: int = 50, workers: int = 1) -> SuiteResult:
    suite = SuiteResult("farey")
    f = PowerAmplitude(j=1.0, gamma=0.95)
    base = expsum.SumRequest(coeff=CoefficientSequence("unit"), f=f, N=N, N_prime=2 * N)
    Q = base.resolved_Q

    stats = dissection_windows(f, N, 2 * N, Q, workers)
    suite.add("partition", 0, 0, detail=f"{stats['arcs']} arcs, Q={Q:.4g}")
    lo, hi = 0.5 - config.M_SLACK, 1.0 + config.M_SLACK
    suite.add("M_window", stats["M_max"], hi, passed=lo <= stats["M_min"] and stats["M_max"] <= hi,
              detail=f"{stats['interior']} interior arcs, min {stats['M_min']:.4g}")
    suite.add("m_window", stats["m_max"], config.PROJECTED_M_CONSTANT)
    w_lo, w_hi = config.OWNER_WINDOW
    suite.add("owner_window", stats["owner_max"], w_hi,
              passed=w_lo <= stats["owner_min"] and stats["owner_max"] <= w_hi)

    suite.add("factorized_identity", expsum.factorized_identity_error(base, workers), 1e-10)

    rng = np.random.default_rng(seed)
    n_hi = min(N, table.n_max) if table is not None else N
    worst = 0.0
    for req in random_requests(rng, requests, n_hi, table):
        direct = expsum.direct_sum(req).value
        regrouped = expsum.farey_decomposed_sum(req, workers=workers).value
        worst = max(worst, abs(regrouped - direct) / (1.0 + abs(direct)))
    suite.add("regrouping", worst, 1e-9, detail=f"{requests} random requests, N' <= {n_hi}")
    return suite


# ---------------------------------------------------------------------------
# oscillatory
# ---------------------------------------------------------------------------

def perron_fixtures(table: Optional[TauTable]) -> List[oscillatory.PerronSetup]:
    setups = [
        oscillatory.PerronSetup(coeffs=(1.0,), x1=0.5, x2=2.0, T0=1e3),
        oscillatory.PerronSetup(coeffs=(1.0,) * 50, x1=10.5, x2=50.0, T0=1e4),
    ]
    if table is not None and table.n_max >= 40:
        setups.append(oscillatory.PerronSetup(coeffs=tuple(float(v) for v in table.lambdas[:40]),
                                              x1=5.5, x2=40.0, T0=1e4))
    return setups


_PERRON_POINTS = (1.5, 30.5, 25.5)


def arc_integral_ratios(N: int, Q: Optional[float] = None, ts: Sequence[float] = (0.0, 100.0),
                        workers: int = 1) -> List[float]:
    """|int over each projected interval of e((f-g) + (t/2 pi) log u)| / (N / f(N)^(1/3))."""
    f = PowerAmplitude(j=1.0, gamma=0.95)
    req = expsum.SumRequest(coeff=CoefficientSequence("unit"), f=f, N=N, N_prime=2 * N, Q=Q)
    scale = N / req.fN ** (1.0 / 3.0)
    ratios = []
    for iv in farey.dissect_and_project(f, N, 2 * N, req.resolved_Q, workers=workers):
        approx = amplitude.build_approximation(f, iv.arc.l, iv.arc.q)
        for t in ts:
            value = oscillatory.integrate(oscillatory.arc_phase(approx, t), iv.lo, iv.hi, tol=1e-8)
            ratios.append(abs(value) / scale)
    return ratios


def oscillatory_suite(table: Optional[TauTable], seed: int = 0, battery: int = 100,
                      ks: Sequence[int] = (1, 2, 3), perron: bool = True) -> SuiteResult:
    suite = SuiteResult("oscillatory")
    rng = np.random.default_rng(seed)
    for k in ks:
        worst = 0.0
        for phase, a, b in oscillatory.random_battery(k, battery, rng):
            try:
                worst = max(worst, oscillatory.vdc_bound_check(phase, k, a, b, tol=1e-9))
            except DegeneratePhaseError:
                continue
        suite.add(f"vdc_k{k}", worst, config.VDC_CONSTANTS[k], detail=f"{battery} phases")

    arc = max(arc_integral_ratios(10_000), default=0.0)
    suite.add("arc_integral", arc, config.VDC_CONSTANTS[3], detail="N=10^4, t in {0, 100}")

    if perron:
        for setup, u in zip(perron_fixtures(table), _PERRON_POINTS):
            err = oscillatory.perron_error(setup, u)
            limit = 5e-3 if len(setup.coeffs) == 1 else 2e-2
            suite.add(f"perron_M{len(setup.coeffs)}", err, limit, detail=f"u={u}, T0={setup.T0:g}")
        small = [oscillatory.PerronSetup(coeffs=s.coeffs, x1=s.x1, x2=s.x2, T0=250.0)
                 for s in perron_fixtures(table)]
        ratios = [oscillatory.perron_doubling_ratio(s, u) for s, u in zip(small, _PERRON_POINTS)]
        mean = sum(ratios) / len(ratios)
        suite.add("perron_doubling", mean, 3.0, passed=1.5 <= mean <= 3.0,
                  detail=", ".join(f"{r:.3f}" for r in ratios))
    return suite


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

GRIDS = {"small": (1_000, 10_000), "full": (1_000, 10_000, 100_000)}


def bounds_rows(table: Optional[TauTable], grid: str = "small", workers: int = 1) -> List[Dict]:
    if grid not in GRIDS:
        raise InvalidArgumentError(f"unknown grid {grid!r}; choose from {', '.join(GRIDS)}")
    kinds = ("unit", "hecke") if table is not None else ("unit",)
    return expsum.bound_ratio_grid(GRIDS[grid], (0.92, 0.95), (1, 2), kinds, (False, True),
                                   table=table, workers=workers)


def bounds_suite(table: Optional[TauTable], grid: str = "small", workers: int = 1) -> SuiteResult:
    suite = SuiteResult("bounds")
    rows = bounds_rows(table, grid, workers)
    ratios = [r["bound_ratio"] for r in rows if r["bound_ratio"] is not None]
    suite.add("ceiling", max(ratios, default=0.0), config.BOUND_RATIO_CEILING,
              detail=f"{len(rows)} grid points, {len(rows) - len(ratios)} not applicable")
    per_N = {}
    for r in rows:
        if r["bound_ratio"] is not None:
            per_N[r["N"]] = max(per_N.get(r["N"], 0.0), r["bound_ratio"])
    Ns = sorted(per_N)
    if len(Ns) > 1:
        worsened = [b for a, b in zip(Ns, Ns[1:]) if per_N[b] > per_N[a] * (1 + 1e-12)]
        suite.add("no_growth", len(worsened), 0,
                  detail=", ".join(f"N={n}: {per_N[n]:.4g}" for n in Ns))
    return suite


# ---------------------------------------------------------------------------
# ps
# ---------------------------------------------------------------------------

def ps_suite(table: Optional[TauTable], c: float = 1.05, N: int = 10_000,
             workers: int = 1) -> SuiteResult:
    suite = SuiteResult("ps")
    cfg = piatetski.PSConfig(c=c, N=N)
    report = piatetski.counting_identity_report(cfg, workers)
    suite.add("counting_identity", report.max_interior_discrepancy, 0,
              detail=f"{report.interior_primes} interior primes, {len(report.boundary)} boundary")

    bad = [r for r in piatetski.ps_enumerate(cfg, workers) if not r.bracket_ok(cfg.gamma)]
    suite.add("bracket_equivalence", len(bad), 0)

    grid = [n for n in config.PS_GRID if n < N] + [N]
    if table is not None and table.n_max >= cfg.p_max:
        rep = piatetski.lambda_square_report(cfg, table, workers)
        suite.add("lambda_square_routes", abs(rep.identity_lhs - rep.identity_rhs), 1e-10,
                  detail=f"{rep.identity_terms} hits with p^2 tabulated")
        if N >= 100_000:
            suite.add("lambda_square_ratio", rep.ratio, 1.3, passed=0.7 <= rep.ratio <= 1.3)
        else:
            suite.add("lambda_square_ratio", rep.ratio, float("inf"), passed=True,
                      detail="reported only below N = 10^5")
        reports = piatetski.lambda_square_grid(c, grid, table, workers)
        ok, deviations = piatetski.ratio_trend(reports)
        suite.add("lambda_square_trend", deviations[-1], deviations[0], passed=ok,
                  detail=", ".join(f"N={r.N}: {d:.4g}" for r, d in zip(reports, deviations)))

    unit = CoefficientSequence("unit")
    worst, parts = 0.0, []
    for n in grid:
        res = piatetski.weighted_prime_sum_check(piatetski.PSConfig(c=c, N=n), unit, workers)
        worst = max(worst, abs(res.diff_over_N) / piatetski.counting_error_envelope(n))
        parts.append(f"N={n}: {res.diff_over_N:.3g}")
    suite.add("counting_error_envelope", worst, 1.0, detail=", ".join(parts))
    return suite


def required_n_max(suite: str, N: int = 10_000, c: float = 1.05, grid: str = "small") -> int:
    """Smallest tau table the suite needs."""
    if suite == "identities":
        return min(10**6, config.TAU_CEILING)
    if suite == "farey":
        return N
    if suite == "oscillatory":
        return 40
    if suite == "bounds":
        return 2 * max(GRIDS.get(grid, GRIDS["small"]))
    if suite == "ps":
        return int(math.floor(N ** c)) + 1
    raise InvalidArgumentError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")


def run_suite(suite: str, table: Optional[TauTable], *, seed: int = 0, N: int = 10_000,
              c: float = 1.05, grid: str = "small", workers: int = 1) -> SuiteResult:
    runners: Dict[str, Callable[[], SuiteResult]] = {
        "identities": lambda: identities_suite(table, seed=seed),
        "farey": lambda: farey_suite(table, N=N, seed=seed, workers=workers),
        "oscillatory": lambda: oscillatory_suite(table, seed=seed),
        "bounds": lambda: bounds_suite(table, grid=grid, workers=workers),
        "ps": lambda: ps_suite(table, c=c, N=N, workers=workers),
    }
    if suite not in runners:
        raise InvalidArgumentError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return runners[suite]()


if __name__ == "__main__":
    t = eigenforms.compute_tau(2_000)
    for name in ("farey", "ps"):
        result = run_suite(name, t, N=1_000)
        print(name, "passed" if result.passed else "FAILED")
        for check in result.checks:
            print(f"  {check.name}: {check.value:.4g} (limit {check.limit:.4g})")
