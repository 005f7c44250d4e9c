#!/usr/bin/env python3
"""
Piatetski-Shapiro primes p = [n^c] for 1 < c < 12/11: enumeration with
certified floors, the bracket counting identity, the saw-tooth function and
the sums of Hecke eigenvalues over these primes.
"""

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import mpmath
import numpy as np

import arith
import config
import ddouble
from amplitude import PowerAmplitude
from eigenforms import CoefficientSequence, TauTable
from errors import FloorAmbiguityError, InvalidArgumentError, OutOfRangeError, ResourceLimitError
from expsum import SumRequest, direct_sum

# mpmath precision is process-global
_MP_LOCK = threading.Lock()


@dataclass(frozen=True)
class PSConfig:
    c: float
    N: int
    diagnostic: bool = False

    def __post_init__(self):
        lo, hi = config.C_RANGE
        if self.diagnostic:
            if not lo <= self.c < hi:
                raise InvalidArgumentError(f"diagnostic c must lie in [{lo}, {hi}), got {self.c}")
        elif not lo < self.c < hi:
            raise InvalidArgumentError(f"c must lie in ({lo}, {hi}), got {self.c}; "
                                       f"pass diagnostic=True for the c = 1 limit")
        if self.N < 1:
            raise InvalidArgumentError(f"N must be >= 1, got {self.N}")

    @property
    def gamma(self) -> float:
        return 1.0 / self.c

    @property
    def p_max(self) -> int:
        return int(floor_power(np.array([self.N]), self.c)[0])


@dataclass(frozen=True)
class PSRecord:
    n: int
    p: int
    is_prime: bool

    def bracket_ok(self, gamma: float) -> bool:
        """-(p+1)^gamma < -n <= -p^gamma, in 50-digit arithmetic."""
        with _MP_LOCK, mpmath.workdps(config.ESCALATION_DPS):
            g = mpmath.mpf(gamma)
            return mpmath.power(self.p, g) <= self.n < mpmath.power(self.p + 1, g)


# ---------------------------------------------------------------------------
# Certified floors
# ---------------------------------------------------------------------------

def _escalated_floor(x: int, exponent: float) -> Tuple[int, bool]:
    """(floor(x^exponent), exact integer?) at ESCALATION_DPS digits."""
    with _MP_LOCK, mpmath.workdps(config.ESCALATION_DPS):
        v = mpmath.power(mpmath.mpf(x), mpmath.mpf(exponent))
        nearest = mpmath.nint(v)
        if abs(v - nearest) < mpmath.mpf(10) ** (-40):
            if float(exponent).is_integer() or x == 1:
                return int(nearest), True
            raise FloorAmbiguityError(x, exponent)
        return int(mpmath.floor(v)), False


def _power_floor(xs: np.ndarray, exponent: float) -> Tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(xs, dtype=np.int64)
    value = ddouble.power(xs.astype(np.float64), exponent)
    floors = ddouble.floor(value).astype(np.int64)
    exact = np.zeros(xs.shape, dtype=bool)
    for i in np.flatnonzero(ddouble.distance_to_integer(value) < config.FLOOR_AMBIGUITY):
        floors[i], exact[i] = _escalated_floor(int(xs[i]), exponent)
    return floors, exact


def floor_power(ns, c: float) -> np.ndarray:
    """[n^c] for positive integers n."""
    return _power_floor(ns, c)[0]


def ceil_power(ps, gamma: float) -> np.ndarray:
    """ceil(p^gamma) = -[-p^gamma]."""
    floors, exact = _power_floor(ps, gamma)
    return floors + np.where(exact, 0, 1)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _check_sieve(cfg: PSConfig) -> int:
    bound = cfg.N ** cfg.c
    if bound > config.SIEVE_CEILING:
        raise ResourceLimitError(f"N^c = {bound:.3e} exceeds the sieve ceiling {config.SIEVE_CEILING}")
    return cfg.p_max


def _all_floors(cfg: PSConfig, workers: int) -> np.ndarray:
    blocks = [np.arange(lo, min(lo + config.PS_BLOCK, cfg.N + 1), dtype=np.int64)
              for lo in range(1, cfg.N + 1, config.PS_BLOCK)]
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(lambda ns: floor_power(ns, cfg.c), blocks))
    else:
        parts = [floor_power(ns, cfg.c) for ns in blocks]
    return np.concatenate(parts)


def ps_hits(cfg: PSConfig, workers: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """(n, p) arrays of every n <= N with p = [n^c] prime."""
    p_max = _check_sieve(cfg)
    floors = _all_floors(cfg, workers)
    if p_max < 2:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    prime = arith.prime_indicator(0, p_max, workers=workers)
    hit = prime[floors - 1]
    return np.flatnonzero(hit).astype(np.int64) + 1, floors[hit]


def ps_enumerate(cfg: PSConfig, workers: int = 1) -> List[PSRecord]:
    ns, ps = ps_hits(cfg, workers)
    return [PSRecord(n=n, p=p, is_prime=True) for n, p in zip(ns.tolist(), ps.tolist())]


# ---------------------------------------------------------------------------
# Counting identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPrime:
    p: int
    enumerated: int
    bracket: int


@dataclass(frozen=True)
class CountingReport:
    cfg: PSConfig
    interior_primes: int
    max_interior_discrepancy: int
    boundary: Tuple[BoundaryPrime, ...]
    hits: int
    bracket_total: int


def counting_identity_report(cfg: PSConfig, workers: int = 1) -> CountingReport:
    """
    #{n <= N : [n^c] = p} against ceil((p+1)^gamma) - ceil(p^gamma) for every
    prime p <= N^c.  Interior primes have ceil((p+1)^gamma) <= N.
    """
    p_max = _check_sieve(cfg)
    floors = _all_floors(cfg, workers)
    primes = arith.primes_in(1, max(p_max, 2), workers=workers).primes
    primes = primes[primes <= p_max]
    enumerated = np.bincount(floors, minlength=p_max + 2)[primes]
    upper = ceil_power(primes + 1, cfg.gamma)
    bracket = upper - ceil_power(primes, cfg.gamma)
    discrepancy = np.abs(enumerated - bracket)
    interior = upper <= cfg.N
    boundary = tuple(BoundaryPrime(p=int(p), enumerated=int(e), bracket=int(b))
                     for p, e, b in zip(primes[~interior], enumerated[~interior], bracket[~interior]))
    return CountingReport(
        cfg=cfg,
        interior_primes=int(interior.sum()),
        max_interior_discrepancy=int(discrepancy[interior].max()) if interior.any() else 0,
        boundary=boundary,
        hits=int(enumerated.sum()),
        bracket_total=int(bracket.sum()))


def counting_identity_check(cfg: PSConfig, workers: int = 1) -> int:
    return counting_identity_report(cfg, workers).max_interior_discrepancy


# ---------------------------------------------------------------------------
# Saw-tooth
# ---------------------------------------------------------------------------

def sawtooth(x):
    """psi(x) = x - [x] - 1."""
    x = np.asarray(x, dtype=np.float64)
    out = x - np.floor(x) - 1.0
    return float(out) if out.ndim == 0 else out


def sawtooth_fourier(x, J: int):
    """-1/2 - sum_{1 <= j <= J} sin(2 pi j x) / (pi j)."""
    if J < 1:
        raise InvalidArgumentError(f"J must be >= 1, got {J}")
    x = np.asarray(x, dtype=np.float64)
    js = np.arange(1, J + 1, dtype=np.float64)
    frac = x - np.floor(x)
    terms = np.sin(2.0 * np.pi * np.multiply.outer(frac, js)) / (np.pi * js)
    out = -0.5 - terms.sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def sawtooth_tail_bound(x, J: int):
    """SAWTOOTH_TAIL / (J * ||x||)."""
    x = np.asarray(x, dtype=np.float64)
    dist = np.abs(x - np.rint(x))
    return config.SAWTOOTH_TAIL / (J * dist)


# ---------------------------------------------------------------------------
# Sums over Piatetski-Shapiro primes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightedSumResult:
    lhs: float
    main: float
    diff: float
    diff_over_N: float


def _gap_weights(primes: np.ndarray, gamma: float) -> np.ndarray:
    """(p+1)^gamma - p^gamma without cancellation."""
    p = primes.astype(np.float64)
    return p ** gamma * np.expm1(gamma * np.log1p(1.0 / p))


def _weighted_check(cfg: PSConfig, hit_values: np.ndarray, prime_values: np.ndarray,
                    primes: np.ndarray) -> WeightedSumResult:
    lhs = math.fsum(hit_values.tolist())
    main = math.fsum((_gap_weights(primes, cfg.gamma) * prime_values).tolist())
    diff = lhs - main
    return WeightedSumResult(lhs=lhs, main=main, diff=diff, diff_over_N=diff / cfg.N)


def weighted_prime_sum_check(cfg: PSConfig, coeff: CoefficientSequence, workers: int = 1) -> WeightedSumResult:
    """sum over hits of a_[n^c] against sum_{p <= N^c} ((p+1)^gamma - p^gamma) a_p."""
    _, ps = ps_hits(cfg, workers)
    primes = arith.primes_in(1, max(cfg.p_max, 2), workers=workers).primes
    primes = primes[primes <= cfg.p_max]
    return _weighted_check(cfg, coeff.at(ps), coeff.at(primes), primes)


def _lambda_squared(table: TauTable, ps: np.ndarray) -> np.ndarray:
    if ps.size and int(ps.max()) > table.n_max:
        raise OutOfRangeError(f"lambda(p)^2 for p up to {int(ps.max())} needs n_max >= {int(ps.max())}; "
                              f"table has {table.n_max}")
    lam = table.lambdas[ps - 1]
    return lam * lam


def main_term(cfg: PSConfig) -> float:
    """li(N) / c: the hit count of the prime number theorem, ~ N / (c log N)."""
    with _MP_LOCK:
        return float(mpmath.li(max(cfg.N, 2))) / cfg.c


def lambda_square_ratio(cfg: PSConfig, table: TauTable, workers: int = 1) -> float:
    """sum over hits of lambda([n^c])^2, divided by li(N) / c."""
    _, ps = ps_hits(cfg, workers)
    return math.fsum(_lambda_squared(table, ps).tolist()) / main_term(cfg)


@dataclass(frozen=True)
class LambdaSquareReport:
    N: int
    c: float
    ps_count: int
    sum_lambda_sq: float
    main_term: float
    ratio: float
    identity_terms: int
    identity_lhs: float
    identity_rhs: float
    diff_over_N: float

    def row(self) -> Dict:
        return {"N": self.N, "c": self.c, "ps_count": self.ps_count,
                "sum_lambda_sq": self.sum_lambda_sq, "main_term": self.main_term,
                "ratio": self.ratio, "diff_over_N": self.diff_over_N}


PS_COLUMNS = ["N", "c", "ps_count", "sum_lambda_sq", "main_term", "ratio", "diff_over_N"]


def lambda_square_report(cfg: PSConfig, table: TauTable, workers: int = 1) -> LambdaSquareReport:
    """
    The ratio, plus lambda(p)^2 = 1 + lambda(p^2) summed over the hits whose
    p^2 is tabulated, plus the bracket-weighted comparison for lambda(p)^2.
    """
    _, ps = ps_hits(cfg, workers)
    lam_sq = _lambda_squared(table, ps)
    total = math.fsum(lam_sq.tolist())
    mt = main_term(cfg)

    covered = ps[ps.astype(np.float64) ** 2 <= table.n_max]
    identity_lhs = math.fsum(_lambda_squared(table, covered).tolist())
    squares = np.array([float(table.lambdas[p * p - 1]) for p in covered.tolist()], dtype=np.float64)
    identity_rhs = covered.size + math.fsum(squares.tolist())

    primes = arith.primes_in(1, max(cfg.p_max, 2), workers=workers).primes
    primes = primes[primes <= cfg.p_max]
    t3 = _weighted_check(cfg, lam_sq, _lambda_squared(table, primes), primes)
    return LambdaSquareReport(N=cfg.N, c=cfg.c, ps_count=int(ps.size), sum_lambda_sq=total,
                          main_term=mt, ratio=total / mt, identity_terms=int(covered.size),
                          identity_lhs=identity_lhs, identity_rhs=identity_rhs,
                          diff_over_N=t3.diff_over_N)


def sampled_j_profile(coeff: CoefficientSequence, gamma: float, N: int,
                      js: Sequence[float], workers: int = 1) -> List[Dict]:
    """|sum_{N < p <= 2N} a_p e(j p^gamma)| and its bound ratio at sampled j."""
    rows = []
    for j in js:
        req = SumRequest(coeff=coeff, f=PowerAmplitude(j=float(j), gamma=gamma), N=N,
                         N_prime=2 * N, prime_only=True)
        result = direct_sum(req, workers=workers)
        rows.append({"j": float(j), "abs_value": abs(result.value), "n_terms": result.n_terms,
                     "bound_ratio": result.bound_ratio})
    return rows


def sym2_pnt_ratio(table: TauTable, x: int) -> float:
    """sum_{p <= x} lambda(p^2) / (x^(1/2) log x)."""
    if x < 3:
        raise InvalidArgumentError(f"x must be >= 3, got {x}")
    primes = arith.primes_in(1, x).primes
    values = CoefficientSequence("hecke-square-at-primes", table).at(primes)
    return math.fsum(values.tolist()) / (math.sqrt(x) * math.log(x))


def lambda_square_grid(c: float, Ns: Sequence[int], table: TauTable,
                       workers: int = 1) -> List[LambdaSquareReport]:
    return [lambda_square_report(PSConfig(c=c, N=int(N)), table, workers) for N in sorted(Ns)]


def ratio_trend(reports: Sequence[LambdaSquareReport]) -> Tuple[bool, List[float]]:
    """|ratio - 1| per N, and whether it never increases as N grows."""
    deviations = [abs(r.ratio - 1.0) for r in sorted(reports, key=lambda r: r.N)]
    ok = all(later <= earlier + 1e-12 for earlier, later in zip(deviations, deviations[1:]))
    return ok, deviations


def counting_error_envelope(N: int) -> float:
    """Ceiling on |diff / N| for unit weights: diff = O(N^(1 - delta))."""
    return config.COUNTING_ERROR_CONSTANT * N ** -config.COUNTING_ERROR_DECAY


if __name__ == "__main__":
    cfg = PSConfig(c=1.05, N=10_000)
    records = ps_enumerate(cfg)
    print(len(records), "hits; first", records[:3])
    report = counting_identity_report(cfg)
    print("interior discrepancy", report.max_interior_discrepancy,
          "boundary primes", [b.p for b in report.boundary])
