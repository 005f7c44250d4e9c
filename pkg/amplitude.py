#!/usr/bin/env python3
"""
Amplitude functions f, the frequency map h(x) = f'(x) + x f''(x), the local
surrogate phase g around x0 = h^{-1}(l/q), and numeric checks of the
growth conditions i)-vii) and of the Taylor error sizes on an arc.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Protocol, Tuple, runtime_checkable

import mpmath
import numpy as np

import config
import ddouble
from ddouble import DD
from errors import InvalidArgumentError, NoSolutionError


@runtime_checkable
class AmplitudeFunction(Protocol):
    """Anything with f and its first four derivatives (numpy-vectorised)."""

    def derivative(self, x, k: int = 0):
        ...


@dataclass(frozen=True)
class PowerAmplitude:
    """f(x) = j * x^gamma."""
    j: float
    gamma: float

    def __post_init__(self):
        if self.j == 0:
            raise InvalidArgumentError("j must be nonzero")
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidArgumentError(f"gamma must lie in (0, 1], got {self.gamma}")

    def __call__(self, x):
        return self.derivative(x, 0)

    def derivative(self, x, k: int = 0):
        coef = self.j
        for i in range(k):
            coef *= self.gamma - i
        return coef * np.power(x, self.gamma - k)

    def h(self, x):
        return self.j * self.gamma ** 2 * np.power(x, self.gamma - 1.0)

    def invert_h(self, y: float) -> float:
        if self.gamma == 1.0:
            raise NoSolutionError("h is constant for gamma = 1")
        base = y / (self.j * self.gamma ** 2)
        if base <= 0:
            raise NoSolutionError(f"h takes no value {y} for j={self.j}")
        return base ** (1.0 / (self.gamma - 1.0))

    def value_dd(self, x) -> DD:
        """f(x) in double-double, x exact doubles."""
        return ddouble.mul_d(ddouble.power(x, self.gamma), self.j)

    def negated(self) -> "PowerAmplitude":
        return PowerAmplitude(j=-self.j, gamma=self.gamma)


def value_dd(f: AmplitudeFunction, x) -> DD:
    if hasattr(f, "value_dd"):
        return f.value_dd(x)
    return ddouble.as_dd(f.derivative(np.asarray(x, dtype=np.float64), 0))


def h(f: AmplitudeFunction, x):
    """f'(x) + x f''(x)."""
    if hasattr(f, "h"):
        return f.h(x)
    return f.derivative(x, 1) + x * f.derivative(x, 2)


def h_prime(f: AmplitudeFunction, x):
    return 2.0 * f.derivative(x, 2) + x * f.derivative(x, 3)


def h_orientation(f: AmplitudeFunction, a: float, b: float) -> int:
    """-1 when h decreases on [a, b], +1 when it increases."""
    return -1 if float(h(f, b)) < float(h(f, a)) else 1


def invert_h(f: AmplitudeFunction, y: float, bracket: Optional[Tuple[float, float]] = None) -> float:
    """x with h(x) = y; closed form when the family has one, else bisection."""
    if hasattr(f, "invert_h"):
        return f.invert_h(y)
    if bracket is None:
        raise NoSolutionError("bisection needs a bracket")
    lo, hi = bracket
    h_lo, h_hi = float(h(f, lo)), float(h(f, hi))
    if not min(h_lo, h_hi) <= y <= max(h_lo, h_hi):
        raise NoSolutionError(f"{y} lies outside h([{lo}, {hi}]) = [{min(h_lo, h_hi)}, {max(h_lo, h_hi)}]")
    increasing = h_hi > h_lo
    while hi - lo > config.INVERSION_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if (float(h(f, mid)) < y) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Conditions i)-vii)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    lo: float
    hi: float
    detail: str = ""


@dataclass(frozen=True)
class ConditionReport:
    N: float
    results: Tuple[ConditionResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> ConditionResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failed(self) -> List[str]:
        return [r.name for r in self.results if not r.passed]


def _windowed(name: str, ratio: np.ndarray, window: Tuple[float, float]) -> ConditionResult:
    mag = np.abs(ratio)
    lo, hi = float(mag.min()), float(mag.max())
    one_sign = bool(np.all(ratio > 0) or np.all(ratio < 0))
    passed = one_sign and window[0] <= lo and hi <= window[1]
    detail = "" if one_sign else "sign change or zero"
    return ConditionResult(name=name, passed=passed, lo=lo, hi=hi, detail=detail)


def _derivatives_consistent(f: AmplitudeFunction, xs: np.ndarray) -> Tuple[bool, float]:
    """Closed-form derivatives against high-precision numeric differentiation."""
    worst = 0.0
    with mpmath.workdps(30):
        for x in xs.tolist():
            scale = abs(float(f.derivative(x, 0)))
            for k in range(1, 5):
                ref = float(mpmath.diff(lambda t: _mp_eval(f, t), mpmath.mpf(x), k))
                got = float(f.derivative(x, k))
                # measured against the f(x)/x^k size condition iv) expects
                worst = max(worst, abs(got - ref) / (scale / x ** k))
    return worst <= 1e-5, worst


def _mp_eval(f: AmplitudeFunction, t):
    if isinstance(f, PowerAmplitude):
        return mpmath.mpf(f.j) * mpmath.power(t, mpmath.mpf(f.gamma))
    return mpmath.mpf(float(f.derivative(float(t), 0)))


def check_conditions(f: AmplitudeFunction, N: float,
                     window: Tuple[float, float] = config.CONDITION_WINDOW,
                     samples: int = config.CONDITION_SAMPLES) -> ConditionReport:
    """Sample [N, 2N] log-uniformly and test conditions i)-vii) against window."""
    if N < 2:
        raise InvalidArgumentError(f"N must be >= 2, got {N}")
    x = np.geomspace(N, 2.0 * N, samples)
    fx = f.derivative(x, 0)
    d = {k: f.derivative(x, k) for k in range(1, 5)}
    results: List[ConditionResult] = []

    finite = all(np.all(np.isfinite(v)) for v in d.values()) and bool(np.all(np.isfinite(fx)))
    consistent, worst = _derivatives_consistent(f, np.geomspace(N, 2.0 * N, 5))
    results.append(ConditionResult("i", finite and consistent, 0.0, worst,
                                   detail=f"max relative derivative mismatch {worst:.2e}"))

    results.append(ConditionResult("ii", bool(np.all(d[1] > 0) and np.all(fx > 0)),
                                   float(d[1].min()), float(d[1].max())))

    results.append(_windowed("iii", f.derivative(2.0 * x, 0) / fx, window))

    per_k = [_windowed(f"iv.{k}", x ** k * d[k] / fx, window) for k in range(1, 5)]
    results.append(ConditionResult(
        "iv", all(r.passed for r in per_k),
        min(r.lo for r in per_k), max(r.hi for r in per_k),
        detail="; ".join(f"{r.name}: [{r.lo:.4g}, {r.hi:.4g}]" for r in per_k)))

    results.append(_windowed("v", x * (d[1] + x * d[2]) / fx, window))
    results.append(_windowed("vi", x ** 2 * (2.0 * d[2] + x * d[3]) / fx, window))
    results.append(_windowed("vii", x ** 2 * (2.0 * d[2] - x * d[3]) / fx, window))
    return ConditionReport(N=N, results=tuple(results))


# ---------------------------------------------------------------------------
# Local approximation g
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalApproximation:
    """
    g(x) = (l/q) x - A log x + C around x0 = h^{-1}(l/q), A = x0^2 f''(x0).

    e(g(n)) = e(C) e(nl/q) n^{-iT} with T = 2 pi A.
    """
    f: AmplitudeFunction = field(repr=False)
    l: int
    q: int
    x0: float
    logcoef: float
    C: float
    C_dd: DD = field(repr=False, compare=False)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.l, self.q)

    @property
    def T(self) -> float:
        return 2.0 * math.pi * self.logcoef

    def g(self, x):
        return self.l / self.q * x - self.logcoef * np.log(x) + self.C

    def g_derivative(self, x, k: int):
        if k == 0:
            return self.g(x)
        if k == 1:
            return self.l / self.q - self.logcoef / x
        # d^k/dx^k of -A log x = -A (-1)^(k-1) (k-1)! / x^k
        return -self.logcoef * (-1) ** (k - 1) * math.factorial(k - 1) / np.power(x, k)

    def residual_derivative(self, x, k: int):
        """(f - g)^{(k)}(x)."""
        return self.f.derivative(x, k) - self.g_derivative(x, k)

    def _slope_dd(self) -> DD:
        return ddouble.ratio(self.l, self.q)

    def residual(self, n) -> np.ndarray:
        """f(n) - g(n) with the cancellation done in double-double."""
        n = np.asarray(n, dtype=np.float64)
        fd = value_dd(self.f, n)
        linear = ddouble.mul_d(self._slope_dd(), n)
        logs = ddouble.mul_d(ddouble.log(ddouble.as_dd(n)), self.logcoef)
        out = ddouble.add(ddouble.sub(fd, linear), ddouble.sub(logs, self.C_dd))
        return out.to_float()

    def phase_parts(self, n) -> Dict[str, np.ndarray]:
        """
        Fractional parts: C, nl/q (exact), A log n, f(n) and the residual
        f(n) - g(n), for the factorized evaluation of e(f(n)).
        """
        n_int = np.asarray(n, dtype=np.int64)
        n = n_int.astype(np.float64)
        return {
            "C": np.asarray(ddouble.frac(self.C_dd)),
            "additive": ((n_int * self.l) % self.q).astype(np.float64) / self.q,
            "log": ddouble.frac(ddouble.mul_d(ddouble.log(ddouble.as_dd(n)), self.logcoef)),
            "f": ddouble.frac(value_dd(self.f, n)),
            "residual": self.residual(n),
        }

    def factorized_terms(self, n) -> Tuple[np.ndarray, np.ndarray]:
        """(e(f(n)), e(C) e(nl/q) n^{-iT} e(f(n) - g(n)))."""
        parts = self.phase_parts(n)
        naive = ddouble.unit_phase(parts["f"])
        factored = (ddouble.unit_phase(parts["C"]) * ddouble.unit_phase(parts["additive"])
                    * ddouble.unit_phase(-parts["log"]) * np.exp(2j * np.pi * parts["residual"]))
        return naive, factored


def build_approximation(f: AmplitudeFunction, l: int, q: int,
                        bracket: Optional[Tuple[float, float]] = None) -> LocalApproximation:
    if q < 1 or math.gcd(l, q) != 1:
        raise InvalidArgumentError(f"need q >= 1 and gcd(l, q) = 1, got {l}/{q}")
    x0 = invert_h(f, l / q, bracket)
    if not math.isfinite(x0) or x0 < 1.0:
        raise NoSolutionError(f"h^-1({l}/{q}) = {x0} is outside [1, inf)")
    A = x0 * x0 * float(f.derivative(x0, 2))
    # C = f(x0) - (l/q) x0 + A log x0
    C_dd = ddouble.add(
        ddouble.sub(value_dd(f, x0), ddouble.mul_d(ddouble.ratio(l, q), x0)),
        ddouble.mul_d(ddouble.log(ddouble.as_dd(x0)), A))
    C_dd = DD(np.float64(C_dd.hi), np.float64(C_dd.lo))
    return LocalApproximation(f=f, l=l, q=q, x0=x0, logcoef=A,
                              C=float(C_dd.hi + C_dd.lo), C_dd=C_dd)


# ---------------------------------------------------------------------------
# Error profile on an arc
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErrorProfile:
    d1_max: float
    d2_max: float
    d3_min: float
    d3_max: float
    d4_max: float
    third_at_x0: float

    def within(self, d1_max: float = config.PROFILE_D1_MAX, d2_max: float = config.PROFILE_D2_MAX,
               d3_window: Tuple[float, float] = config.PROFILE_D3_WINDOW) -> bool:
        return (self.d1_max <= d1_max and self.d2_max <= d2_max
                and d3_window[0] <= self.d3_min and self.d3_max <= d3_window[1])


def approximation_error_profile(approx: LocalApproximation, interval: Tuple[float, float],
                                samples: int, Q: float, N: float) -> ErrorProfile:
    """
    Normalized sizes of (f-g)', (f-g)'', (f-g)''' and (f-g)'''' on (x1, x2]:
    |(f-g)'| (qQ)^2 f(N)/N, |(f-g)''| qQN, |(f-g)'''| N^3/f(N), |(f-g)''''| N^4/f(N).
    """
    x1, x2 = interval
    if x2 <= x1:
        raise InvalidArgumentError(f"empty interval ({x1}, {x2}]")
    x = np.linspace(x1, x2, samples + 1)[1:]
    fN = abs(float(approx.f.derivative(N, 0)))
    qQ = approx.q * Q
    d1 = np.abs(approx.residual_derivative(x, 1)) * qQ ** 2 * fN / N
    d2 = np.abs(approx.residual_derivative(x, 2)) * qQ * N
    d3 = np.abs(approx.residual_derivative(x, 3)) * N ** 3 / fN
    d4 = np.abs(approx.residual_derivative(x, 4)) * N ** 4 / fN
    # g''' = -2A/x^3 with A = x0^2 f''(x0), so (f-g)'''(x0) = f'''(x0) + 2 f''(x0)/x0
    third = float(approx.residual_derivative(approx.x0, 3))
    return ErrorProfile(d1_max=float(d1.max()), d2_max=float(d2.max()),
                        d3_min=float(d3.min()), d3_max=float(d3.max()),
                        d4_max=float(d4.max()), third_at_x0=third)


if __name__ == "__main__":
    f = PowerAmplitude(j=1.0, gamma=0.95)
    report = check_conditions(f, 10_000)
    for r in report.results:
        print(f"{r.name:>4}: {'ok' if r.passed else 'FAIL'} [{r.lo:.4g}, {r.hi:.4g}] {r.detail}")
    approx = build_approximation(f, 1, 2)
    print("x0 =", approx.x0, "T =", approx.T)
