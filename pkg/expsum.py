#!/usr/bin/env python3
"""
Exponential sums  sum_{N < n <= N'} a_n e(f(n))  (optionally over primes only),
evaluated directly and regrouped over the projected Farey arcs, with the
ratio against N^(3/4) f(N)^(1/6) tracked for trend tables.

Phases are reduced mod 1 in double-double before e(.) is taken.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

import amplitude
import arith
import config
import ddouble
import farey
from amplitude import AmplitudeFunction, LocalApproximation, PowerAmplitude
from eigenforms import CoefficientSequence, TauTable
from errors import InvalidArgumentError, NoSolutionError


@dataclass(frozen=True)
class SumRequest:
    """
    One sum over (N, N'].  Q=None selects Q = N^(1/2) / f(N)^(1/3);
    linear_theta replaces f(n) by theta*n (diagnostic, direct_sum only).
    """
    coeff: CoefficientSequence
    f: AmplitudeFunction
    N: int
    N_prime: int
    prime_only: bool = False
    Q: Optional[float] = None
    linear_theta: Optional[float] = None

    def __post_init__(self):
        if self.N < 1:
            raise InvalidArgumentError(f"N must be >= 1, got {self.N}")
        if not self.N <= self.N_prime <= 2 * self.N:
            raise InvalidArgumentError(f"need N <= N' <= 2N, got N={self.N}, N'={self.N_prime}")

    @property
    def fN(self) -> float:
        return abs(float(self.f.derivative(float(self.N), 0)))

    @property
    def resolved_Q(self) -> float:
        return self.Q if self.Q is not None else default_Q(self.N, self.fN)

    @property
    def empty(self) -> bool:
        return self.N_prime == self.N


@dataclass(frozen=True)
class ArcContribution:
    interval: farey.ProjectedInterval
    value: complex
    n_terms: int
    # max |(f-g)'|, |(f-g)''|, |(f-g)'''| over the arc's integers
    residual_norms: Tuple[float, float, float] = (float("nan"),) * 3


@dataclass(frozen=True)
class SumResult:
    value: complex
    n_terms: int
    abs_sum: float
    bound_ratio: Optional[float]
    per_arc: Optional[Tuple[ArcContribution, ...]] = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# Q and admissibility
# ---------------------------------------------------------------------------

def default_Q(N: float, fN: float) -> float:
    """Q = N^(1/2) / f(N)^(1/3)."""
    return math.sqrt(N) / abs(fN) ** (1.0 / 3.0)


def q_condition_ok(N: float, fN: float, Q: float, eta: float = config.Q_CONDITION_ETA) -> bool:
    """N^(1+eta) / f(N) <= Q <= N."""
    return N ** (1.0 + eta) / abs(fN) <= Q <= N


def admissible(N: float, fN: float, eta: float = config.ADMISSIBILITY_ETA) -> bool:
    """N^(3/4+eta) <= f(N) <= N^(3/2-eta)."""
    return N ** (0.75 + eta) <= abs(fN) <= N ** (1.5 - eta)


def bound_ratio(req: SumRequest, value: complex) -> Optional[float]:
    """|value| / (N^(3/4) f(N)^(1/6)); None when f(N) is outside the admissible window."""
    if req.linear_theta is not None or not admissible(req.N, req.fN):
        return None
    if value == 0:
        return 0.0
    return abs(value) / (req.N ** 0.75 * req.fN ** (1.0 / 6.0))


# ---------------------------------------------------------------------------
# Term evaluation
# ---------------------------------------------------------------------------

def _phase_fractions(req: SumRequest, ns: np.ndarray) -> np.ndarray:
    x = ns.astype(np.float64)
    if req.linear_theta is not None:
        return ddouble.frac(ddouble.DD(*ddouble.two_prod(np.float64(req.linear_theta), x)))
    return ddouble.frac(amplitude.value_dd(req.f, x))


def _coefficients(req: SumRequest, ns: np.ndarray, primes: Optional[np.ndarray]) -> np.ndarray:
    a = req.coeff.at(ns)
    if primes is not None:
        a = np.where(primes[ns - req.N - 1], a, 0.0)
    return a


def _prime_mask(req: SumRequest, workers: int) -> Optional[np.ndarray]:
    if not req.prime_only or req.empty:
        return None
    return arith.prime_indicator(req.N, req.N_prime, workers=workers)


def _fsum_complex(values: Iterable[complex]) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _term_sum(terms: np.ndarray) -> complex:
    return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))


def direct_sum(req: SumRequest, workers: int = 1) -> SumResult:
    """The finite sum term by term with exactly rounded accumulation."""
    if req.empty:
        return SumResult(value=0j, n_terms=0, abs_sum=0.0, bound_ratio=bound_ratio(req, 0j))
    ns = np.arange(req.N + 1, req.N_prime + 1, dtype=np.int64)
    primes = _prime_mask(req, workers)
    a = _coefficients(req, ns, primes)
    terms = a * ddouble.unit_phase(_phase_fractions(req, ns))
    value = _term_sum(terms)
    n_terms = int(primes.sum()) if primes is not None else int(ns.size)
    return SumResult(value=value, n_terms=n_terms, abs_sum=math.fsum(np.abs(a).tolist()),
                     bound_ratio=bound_ratio(req, value))


# ---------------------------------------------------------------------------
# Farey regrouping
# ---------------------------------------------------------------------------

def _approximation(req: SumRequest, interval: farey.ProjectedInterval) -> Optional[LocalApproximation]:
    arc = interval.arc
    try:
        return amplitude.build_approximation(req.f, arc.l, arc.q, (float(req.N), float(req.N_prime)))
    except NoSolutionError:
        return None


def _residual_norms(approx: Optional[LocalApproximation], ns: np.ndarray) -> Tuple[float, float, float]:
    if approx is None or ns.size == 0:
        return (float("nan"),) * 3
    x = ns.astype(np.float64)
    return tuple(float(np.max(np.abs(approx.residual_derivative(x, k)))) for k in (1, 2, 3))


def _arc_contribution(req: SumRequest, interval: farey.ProjectedInterval,
                      primes: Optional[np.ndarray], factorized: bool,
                      diagnostics: bool) -> ArcContribution:
    ns = interval.integers()
    if ns.size == 0:
        return ArcContribution(interval=interval, value=0j, n_terms=0)
    a = _coefficients(req, ns, primes)
    approx = _approximation(req, interval) if (factorized or diagnostics) else None
    if factorized and approx is not None:
        _, phases = approx.factorized_terms(ns)
    else:
        phases = ddouble.unit_phase(_phase_fractions(req, ns))
    n_terms = int(primes[ns - req.N - 1].sum()) if primes is not None else int(ns.size)
    return ArcContribution(interval=interval, value=_term_sum(a * phases), n_terms=n_terms,
                           residual_norms=_residual_norms(approx, ns) if diagnostics else (float("nan"),) * 3)


def _intervals(req: SumRequest, workers: int) -> List[farey.ProjectedInterval]:
    Q = req.resolved_Q
    if not q_condition_ok(req.N, req.fN, Q):
        raise InvalidArgumentError(
            f"Q={Q:.6g} violates N/f(N) <= Q <= N for N={req.N}, f(N)={req.fN:.6g}")
    intervals = farey.dissect_and_project(req.f, req.N, req.N_prime, Q, workers=workers)
    farey.partition_check(intervals, req.N, req.N_prime)
    return intervals


def farey_decomposed_sum(req: SumRequest, factorized: bool = False, diagnostics: bool = False,
                         workers: int = 1) -> SumResult:
    """
    The same sum regrouped arc by arc.  With factorized=True each arc uses
    e(C) e(nl/q) n^(-iT) e(f(n) - g(n)) in place of e(f(n)).
    """
    if req.linear_theta is not None:
        raise InvalidArgumentError("the Farey regrouping needs an amplitude function, not a linear phase")
    if req.empty:
        return SumResult(value=0j, n_terms=0, abs_sum=0.0, bound_ratio=bound_ratio(req, 0j),
                         per_arc=() if diagnostics else None)

    intervals = _intervals(req, workers)
    primes = _prime_mask(req, workers)

    def work(interval):
        return _arc_contribution(req, interval, primes, factorized, diagnostics)

    if workers > 1 and len(intervals) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(work, intervals))
    else:
        parts = [work(iv) for iv in intervals]

    value = _fsum_complex(p.value for p in parts)
    a = _coefficients(req, np.arange(req.N + 1, req.N_prime + 1, dtype=np.int64), primes)
    return SumResult(value=value, n_terms=sum(p.n_terms for p in parts),
                     abs_sum=math.fsum(np.abs(a).tolist()),
                     bound_ratio=bound_ratio(req, value),
                     per_arc=tuple(parts) if diagnostics else None)


def factorized_identity_error(req: SumRequest, workers: int = 1) -> float:
    """max over arcs and n of |e(f(n)) - e(C) e(nl/q) n^(-iT) e(f(n) - g(n))|."""
    worst = 0.0
    for interval in _intervals(req, workers):
        ns = interval.integers()
        approx = _approximation(req, interval)
        if ns.size == 0 or approx is None:
            continue
        naive, factored = approx.factorized_terms(ns)
        worst = max(worst, float(np.max(np.abs(naive - factored))))
    return worst


def predicted_arc_count(req: SumRequest) -> float:
    """Farey density: (3 / pi^2) Q^2 |h(N) - h(N')|."""
    Q = req.resolved_Q
    span = abs(float(amplitude.h(req.f, float(req.N))) - float(amplitude.h(req.f, float(req.N_prime))))
    return 3.0 / math.pi ** 2 * Q * Q * span


def arc_count_ratio(req: SumRequest) -> float:
    a, b = farey.h_interval(req.f, req.N, req.N_prime)
    return len(farey.dissect(a, b, req.resolved_Q)) / predicted_arc_count(req)


# ---------------------------------------------------------------------------
# Trend tables
# ---------------------------------------------------------------------------

GRID_COLUMNS = ["N", "gamma", "j", "kind", "prime_only", "n_terms", "value_re", "value_im",
                "abs_value", "bound_ratio"]


def bound_ratio_grid(Ns: Sequence[int], gammas: Sequence[float], js: Sequence[float],
                     kinds: Sequence[str], prime_options: Sequence[bool],
                     table: Optional[TauTable] = None, workers: int = 1) -> List[Dict]:
    """One row per (N, gamma, j, kind, prime_only) over (N, 2N]."""
    rows = []
    for N in Ns:
        for gamma in gammas:
            for j in js:
                f = PowerAmplitude(j=float(j), gamma=float(gamma))
                for kind in kinds:
                    coeff = CoefficientSequence(kind, None if kind == "unit" else table)
                    for prime_only in prime_options:
                        req = SumRequest(coeff=coeff, f=f, N=int(N), N_prime=2 * int(N),
                                         prime_only=bool(prime_only))
                        result = direct_sum(req, workers=workers)
                        rows.append({
                            "N": int(N), "gamma": float(gamma), "j": float(j), "kind": kind,
                            "prime_only": bool(prime_only), "n_terms": result.n_terms,
                            "value_re": result.value.real, "value_im": result.value.imag,
                            "abs_value": abs(result.value), "bound_ratio": result.bound_ratio,
                        })
    return rows


def conjugate_request(req: SumRequest) -> SumRequest:
    """The request with f replaced by -f."""
    if not isinstance(req.f, PowerAmplitude):
        raise InvalidArgumentError("conjugation is defined for the power family")
    return replace(req, f=req.f.negated())


if __name__ == "__main__":
    f = PowerAmplitude(j=1.0, gamma=0.95)
    req = SumRequest(coeff=CoefficientSequence("unit"), f=f, N=10_000, N_prime=20_000)
    direct = direct_sum(req)
    regrouped = farey_decomposed_sum(req, factorized=True)
    print("direct :", direct.value, "ratio", direct.bound_ratio)
    print("regroup:", regrouped.value)
