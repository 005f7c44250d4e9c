#!/usr/bin/env python3
"""
Oscillatory integrals int w(x) e(phi(x)) dx by panelled Gauss-Legendre,
the k-th derivative test ratio, the truncated Perron integral for finite
Dirichlet polynomials and the partial-summation identity.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss

import config
from amplitude import LocalApproximation
from errors import BudgetExceededError, DegeneratePhaseError, InvalidArgumentError

Func = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Phase:
    """phi and its derivatives up to order len(derivs) - 1 (at most 4)."""
    derivs: Tuple[Func, ...] = field(repr=False)
    label: str = ""

    def __post_init__(self):
        if not 1 <= len(self.derivs) <= 5:
            raise InvalidArgumentError("a phase carries phi and up to four derivatives")

    @property
    def k_max(self) -> int:
        return len(self.derivs) - 1

    def __call__(self, x):
        return self.derivs[0](x)

    def d(self, k: int, x):
        if k > self.k_max:
            raise InvalidArgumentError(f"phase {self.label!r} has no derivative of order {k}")
        return self.derivs[k](x)

    @classmethod
    def polynomial(cls, coeffs: Sequence[float], log_coef: float = 0.0,
                   log_shift: float = 1.0, label: str = "") -> "Phase":
        """sum coeffs[i] x^i + log_coef * log(x + log_shift)."""
        poly = Polynomial(coeffs)
        derivs = []
        for k in range(5):
            p = poly.deriv(k) if k else poly

            def fn(x, p=p, k=k):
                x = np.asarray(x, dtype=np.float64)
                out = p(x)
                if log_coef:
                    if k == 0:
                        out = out + log_coef * np.log(x + log_shift)
                    else:
                        out = out + log_coef * (-1) ** (k - 1) * math.factorial(k - 1) / (x + log_shift) ** k
                return out
            derivs.append(fn)
        return cls(tuple(derivs), label=label or f"poly{list(coeffs)}+{log_coef}log")

    @classmethod
    def linear(cls, t: float) -> "Phase":
        return cls.polynomial([0.0, t], label=f"linear {t}")


def arc_phase(approx: LocalApproximation, t: float) -> Phase:
    """(f - g)(u) + (t / 2 pi) log u on an arc."""
    c = t / (2.0 * math.pi)

    def make(k):
        def fn(u):
            u = np.asarray(u, dtype=np.float64)
            if k == 0:
                return approx.residual(u) + c * np.log(u)
            return approx.residual_derivative(u, k) + c * (-1) ** (k - 1) * math.factorial(k - 1) / u ** k
        return fn

    return Phase(tuple(make(k) for k in range(5)), label=f"arc {approx.l}/{approx.q} t={t}")


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

_ENVELOPE_CELLS = 4096


def _panel_edges(phase: Phase, a: float, b: float, cycles: float, max_panels: int) -> np.ndarray:
    """Breakpoints with width <= cycles / (1 + |phi'|) against a sampled envelope."""
    grid = np.linspace(a, b, _ENVELOPE_CELLS + 1)
    slope = np.abs(phase.d(1, grid))
    cell_max = np.maximum(slope[:-1], slope[1:])
    widths = np.diff(grid)
    counts = np.maximum(1, np.ceil(widths * (1.0 + cell_max) / cycles)).astype(np.int64)
    total = int(counts.sum())
    if total > max_panels:
        raise BudgetExceededError(f"{total} panels needed on [{a}, {b}]", estimate=complex("nan"),
                                  error=float("inf"))
    starts = np.repeat(grid[:-1], counts)
    steps = np.repeat(widths / counts, counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    edges = np.empty(total + 1)
    edges[:-1] = starts + offsets * steps
    edges[-1] = b
    return edges


def _gauss(phase: Phase, edges: np.ndarray, order: int, weight: Optional[Func]) -> complex:
    nodes, weights = leggauss(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = mid[:, None] + half[:, None] * nodes[None, :]
    values = np.exp(2j * np.pi * phase(x))
    if weight is not None:
        values = values * weight(x)
    per_panel = values @ weights
    return complex(math.fsum((half * per_panel.real).tolist()) + 1j * math.fsum((half * per_panel.imag).tolist()))


def integrate_with_error(phase: Phase, a: float, b: float, tol: float = 1e-10,
                         weight: Optional[Func] = None,
                         max_panels: int = config.MAX_PANELS) -> Tuple[complex, float]:
    """(int_a^b w(x) e(phi(x)) dx, error estimate)."""
    if not a < b:
        raise InvalidArgumentError(f"need a < b, got [{a}, {b}]")
    cycles = config.PANEL_CYCLES
    best = (complex("nan"), float("inf"))
    while True:
        try:
            edges = _panel_edges(phase, a, b, cycles, max_panels)
        except BudgetExceededError:
            raise BudgetExceededError(f"tolerance {tol} not reached on [{a}, {b}]",
                                      estimate=best[0], error=best[1]) from None
        fine = _gauss(phase, edges, config.GAUSS_ORDER, weight)
        coarse = _gauss(phase, edges, config.GAUSS_ORDER // 2, weight)
        err = abs(fine - coarse)
        if err < best[1]:
            best = (fine, err)
        if err <= tol:
            return fine, err
        cycles /= 2.0


def integrate(phase: Phase, a: float, b: float, tol: float = 1e-10,
              weight: Optional[Func] = None) -> complex:
    return integrate_with_error(phase, a, b, tol, weight)[0]


# ---------------------------------------------------------------------------
# k-th derivative test
# ---------------------------------------------------------------------------

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(fn: Callable[[float], float], lo: float, hi: float, iters: int = 80) -> float:
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = fn(d)
    return min(fc, fd)


def derivative_floor(phase: Phase, k: int, a: float, b: float) -> float:
    """min over [a, b] of |phi^(k)|: dense sample, then golden-section near the argmin."""
    xs = np.linspace(a, b, config.LAMBDA_SAMPLES)
    vals = np.abs(phase.d(k, xs))
    i = int(np.argmin(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
    refined = _golden_min(lambda x: float(abs(phase.d(k, x))), lo, hi)
    return min(float(vals[i]), refined)


def vdc_bound_check(phase: Phase, k: int, a: float, b: float, tol: float = 1e-10) -> float:
    """|int_a^b e(phi)| * Lambda^(1/k), Lambda = min |phi^(k)|."""
    if k not in (1, 2, 3, 4):
        raise InvalidArgumentError(f"k must be 1..4, got {k}")
    lam = derivative_floor(phase, k, a, b)
    if lam < config.DEGENERATE_LAMBDA:
        raise DegeneratePhaseError(f"min |phi^({k})| = {lam:.3e} on [{a}, {b}]")
    return abs(integrate(phase, a, b, tol)) * lam ** (1.0 / k)


def random_battery(k: int, count: int, rng: np.random.Generator) -> List[Tuple[Phase, float, float]]:
    """
    Polynomial + logarithmic phases whose k-th derivative keeps one sign;
    for k = 1 the derivative is also monotone.
    """
    cases = []
    for _ in range(count):
        length = float(rng.uniform(0.5, 20.0 if k > 1 else 5.0))
        c = float(rng.uniform(0.1, 3.0))
        if k == 1:
            coeffs = [0.0, float(rng.uniform(3.5, 30.0)), float(rng.uniform(0.0, 5.0))]
            log_coef = -c
        elif k == 2:
            coeffs = [0.0, float(rng.uniform(-5, 5)), float(rng.uniform(0.05, 3.0)),
                      float(rng.uniform(0.0, 0.1))]
            log_coef = -c
        elif k == 3:
            coeffs = [0.0, float(rng.uniform(-5, 5)), float(rng.uniform(-1, 1)),
                      float(rng.uniform(0.01, 0.5)), float(rng.uniform(0.0, 0.01))]
            log_coef = c
        else:
            coeffs = [0.0, float(rng.uniform(-5, 5)), float(rng.uniform(-1, 1)), 0.0,
                      float(rng.uniform(0.001, 0.05)), float(rng.uniform(0.0, 0.0005))]
            log_coef = -c
        cases.append((Phase.polynomial(coeffs, log_coef=log_coef), 0.0, length))
    return cases


# ---------------------------------------------------------------------------
# Perron and partial summation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerronSetup:
    """Finite coefficients C_1..C_M (coeffs[n-1]) on the line sigma = 1 + eps."""
    coeffs: Tuple[complex, ...]
    x1: float
    x2: float
    T0: float
    sigma: float = 1.0 + config.PERRON_EPSILON

    def __post_init__(self):
        if not self.x1 < self.x2:
            raise InvalidArgumentError(f"need x1 < x2, got {self.x1}, {self.x2}")
        if self.T0 <= 0:
            raise InvalidArgumentError(f"T0 must be positive, got {self.T0}")

    def exact_partial_sum(self, u: float) -> complex:
        return complex(sum(c for n, c in enumerate(self.coeffs, start=1) if self.x1 < n <= u))


def perron_kernel(y: float, sigma: float, T0: float, tol: float) -> complex:
    """(1 / 2 pi i) int_{sigma - iT0}^{sigma + iT0} y^s ds / s."""
    L = math.log(y)
    value = integrate(Phase.linear(L / (2.0 * math.pi)), -T0, T0, tol / max(1.0, y ** sigma),
                      weight=lambda t: 1.0 / (sigma + 1j * t))
    return y ** sigma * value / (2.0 * math.pi)


def perron_truncated(setup: PerronSetup, u: float, tol: float = 1e-9) -> complex:
    """Sum over n of C_n (K(u/n) - K(x1/n)), K the truncated Perron kernel."""
    if not setup.x1 < u <= setup.x2:
        raise InvalidArgumentError(f"need x1 < u <= x2, got u={u}")
    nonzero = [(n, c) for n, c in enumerate(setup.coeffs, start=1) if c != 0]
    if not nonzero:
        return 0j
    per_term = tol / len(nonzero)
    total = 0j
    for n, c in nonzero:
        total += c * (perron_kernel(u / n, setup.sigma, setup.T0, per_term)
                      - perron_kernel(setup.x1 / n, setup.sigma, setup.T0, per_term))
    return total


def perron_error(setup: PerronSetup, u: float, tol: float = 1e-9) -> float:
    return abs(perron_truncated(setup, u, tol) - setup.exact_partial_sum(u))


def perron_doubling_ratio(setup: PerronSetup, u: float, jitter: int = 8, tol: float = 1e-9) -> float:
    """
    Mean error at T0 over mean error at 2 T0, each mean taken over T0 (1 + k/(2 jitter)),
    k < jitter, to average out the oscillation of the truncation error in T0.
    """
    def mean_error(T0):
        errs = [perron_error(replace(setup, T0=T0 * (1.0 + k / (2.0 * jitter))), u, tol)
                for k in range(jitter)]
        return sum(errs) / len(errs)

    return mean_error(setup.T0) / mean_error(2.0 * setup.T0)


def perron_error_bound(u: float, T0: float, eps: float = config.PERRON_EPSILON) -> float:
    """Envelope u^(1+eps)/T0 + u^eps of the truncation error."""
    return u ** (1.0 + eps) / T0 + u ** eps


def default_T0(N: float, fN: float, eta: float = config.ADMISSIBILITY_ETA) -> float:
    """T0 = min(N, f(N)) N^(-eta)."""
    return min(N, abs(fN)) * N ** (-eta)


def partial_summation_check(coeffs: Sequence[complex], Z: Func, Z_prime: Func,
                            x1: float, x2: float) -> Tuple[complex, complex]:
    """
    (sum_{x1 < n <= x2} C_n Z(n),
     Z(x2) S(x2) - int_{x1}^{x2} S(u) Z'(u) du) with S(u) = sum_{x1 < n <= u} C_n.
    """
    if not x1 < x2:
        raise InvalidArgumentError(f"need x1 < x2, got {x1}, {x2}")
    c = np.asarray(coeffs, dtype=np.complex128)
    first = math.floor(x1) + 1
    last = min(math.floor(x2), c.size)
    ns = np.arange(first, last + 1)
    cs = c[ns - 1] if ns.size else np.zeros(0, dtype=np.complex128)

    direct = complex(np.sum(cs * Z(ns.astype(np.float64)))) if ns.size else 0j

    breaks = np.concatenate(([x1], np.arange(first, math.floor(x2) + 1, dtype=np.float64)))
    breaks = np.unique(np.concatenate((breaks[breaks < x2], [x2])))
    # S on [breaks[i], breaks[i+1]) counts n <= breaks[i]
    running = np.concatenate(([0j], np.cumsum(cs)))
    S = running[np.searchsorted(ns, breaks[:-1], side="right")]

    nodes, weights = leggauss(config.GAUSS_ORDER)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * (breaks[1:] - breaks[:-1])
    x = mid[:, None] + half[:, None] * nodes[None, :]
    piece_integrals = half * (Z_prime(x) @ weights)
    rhs = complex(Z(np.float64(x2))) * complex(running[-1]) - complex(np.sum(S * piece_integrals))
    return direct, rhs


def kernel_split_check(approx: LocalApproximation, x1: float, x2: float, s: complex,
                       tol: float = 1e-10) -> Tuple[complex, complex]:
    """
    I(s) = Z(x2)(x2^s - x1^s) - int Z'(u)(u^s - x1^s) du, Z = e(f - g),
    against I0 - I1 + I2 with I0 = Z(x2)(x2^s - x1^s), I1 = int Z'(u) u^s du,
    I2 = x1^s int Z'(u) du.
    """
    sigma, t = s.real, s.imag
    residual_phase = arc_phase(approx, 0.0)
    with_t = arc_phase(approx, t)
    dres = lambda u: 2j * np.pi * approx.residual_derivative(u, 1)
    Zx2 = complex(np.exp(2j * np.pi * approx.residual(np.float64(x2))))

    I0 = Zx2 * (x2 ** s - x1 ** s)
    I1 = integrate(with_t, x1, x2, tol, weight=lambda u: dres(u) * u ** sigma)
    I2 = x1 ** s * integrate(residual_phase, x1, x2, tol, weight=dres)
    direct = I0 - integrate(residual_phase, x1, x2, tol,
                            weight=lambda u: dres(u) * (u ** s - x1 ** s))
    return direct, I0 - I1 + I2


if __name__ == "__main__":
    print("int_0^1 e(3.7x) =", integrate(Phase.linear(3.7), 0.0, 1.0))
    setup = PerronSetup(coeffs=(1.0,), x1=0.5, x2=2.0, T0=1000.0)
    print("Perron, C_1 = 1:", perron_truncated(setup, 1.5))
