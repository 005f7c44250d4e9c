#!/usr/bin/env python3
"""
Farey dissection of level Q of an h-image interval, and projection of the
arcs back to n-space through h^{-1}.

Arc endpoints are mediants of consecutive Farey fractions and stay exact
Fractions; floats appear only when an endpoint is pushed through h^{-1}.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

import amplitude
import config
from amplitude import AmplitudeFunction
from errors import ConsistencyError, InvalidArgumentError, NoSolutionError

Real = Union[int, float, Fraction]


@dataclass(frozen=True)
class FareyArc:
    """[l/q - M1/(qQ), l/q + M2/(qQ)) clipped to the dissected interval."""
    l: int
    q: int
    left: Fraction
    right: Fraction
    Q: float
    clipped_left: bool = False
    clipped_right: bool = False

    @property
    def center(self) -> Fraction:
        return Fraction(self.l, self.q)

    @property
    def M1(self) -> float:
        return float(self.center - self.left) * self.q * self.Q

    @property
    def M2(self) -> float:
        return float(self.right - self.center) * self.q * self.Q

    @property
    def clipped(self) -> bool:
        return self.clipped_left or self.clipped_right

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def m_window_ok(self, slack: float = config.M_SLACK) -> bool:
        lo, hi = 0.5 - slack, 1.0 + slack
        return lo <= self.M1 <= hi and lo <= self.M2 <= hi


@dataclass(frozen=True)
class ProjectedInterval:
    """The n-interval (lo, hi] of one arc; x0 = h^{-1}(l/q)."""
    arc: FareyArc
    x0: float
    lo: float
    hi: float

    @property
    def m1(self) -> float:
        return self.x0 - self.lo

    @property
    def m2(self) -> float:
        return self.hi - self.x0

    def integers(self) -> np.ndarray:
        return np.arange(math.floor(self.lo) + 1, math.floor(self.hi) + 1, dtype=np.int64)

    def count(self) -> int:
        return math.floor(self.hi) - math.floor(self.lo)


# ---------------------------------------------------------------------------
# Farey sequence
# ---------------------------------------------------------------------------

def next_farey(l: int, q: int, Q: float) -> Tuple[int, int]:
    """Successor of l/q in the Farey sequence of order floor(Q) (shifted by integers)."""
    order = math.floor(Q)
    if q < 1 or q > order or math.gcd(l, q) != 1:
        raise InvalidArgumentError(f"{l}/{q} is not a reduced fraction of order {order}")
    # successor c/d has c q - l d = 1 with d maximal <= order
    d0 = 0 if q == 1 else (-pow(l, -1, q)) % q
    d = d0 + q * ((order - d0) // q)
    c = (1 + l * d) // q
    return c, d


def _farey_from(l: int, q: int, order: int) -> Iterator[Tuple[int, int]]:
    """Farey fractions of the given order, starting at l/q and increasing."""
    a, b = l, q
    c, d = next_farey(l, q, order)
    yield a, b
    while True:
        yield c, d
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b


def _mediant(a: int, b: int, c: int, d: int) -> Fraction:
    return Fraction(a + c, b + d)


def dissect(a: Real, b: Real, Q: float) -> List[FareyArc]:
    """
    Partition [a, b) into Farey arcs of level Q.

    Every reduced l/q in [a, b) with q <= Q owns one arc; the first and last
    arcs may belong to fractions just outside [a, b).
    """
    a, b = Fraction(a), Fraction(b)
    if b <= a:
        raise InvalidArgumentError(f"need a < b, got [{a}, {b})")
    if Q < 1:
        raise InvalidArgumentError(f"Q must be >= 1, got {Q}")
    order = math.floor(Q)

    walk = _farey_from(math.floor(a), 1, order)
    prev = next(walk)
    # advance to the last fraction <= a
    cur = next(walk)
    while Fraction(*cur) <= a:
        prev, cur = cur, next(walk)

    arcs: List[FareyArc] = []
    left_edge = a
    owner = prev
    while True:
        right_edge = _mediant(*owner, *cur)
        if right_edge > left_edge:
            right = min(right_edge, b)
            arcs.append(FareyArc(
                l=owner[0], q=owner[1], left=left_edge, right=right, Q=Q,
                clipped_left=(left_edge == a and not _is_interior_left(owner, left_edge, order)),
                clipped_right=(right == b and right_edge != b)))
            left_edge = right
        if left_edge >= b:
            break
        owner, cur = cur, next(walk)

    return arcs


def _is_interior_left(owner: Tuple[int, int], edge: Fraction, order: int) -> bool:
    """True when edge is exactly the mediant with the Farey predecessor."""
    l, q = owner
    # predecessor a/b has l b - a q = 1 with b maximal <= order
    b0 = 0 if q == 1 else pow(l, -1, q) % q
    b = b0 + q * ((order - b0) // q)
    a = (l * b - 1) // q
    return edge == _mediant(a, b, l, q)


# ---------------------------------------------------------------------------
# Projection to n-space
# ---------------------------------------------------------------------------

def _inverse(f: AmplitudeFunction, y: Fraction, bracket: Tuple[float, float]) -> float:
    return amplitude.invert_h(f, float(y), bracket)


def project(arc: FareyArc, f: AmplitudeFunction, N: float, N_prime: float, Q: float,
            h_range: Optional[Tuple[Fraction, Fraction]] = None) -> ProjectedInterval:
    """
    h^{-1} of the arc as an interval (lo, hi] inside (N, N'].

    h_range is the dissected [a, b); endpoints equal to a or b map exactly to
    N or N' so that adjacent projections share endpoints bit for bit.
    """
    orientation = amplitude.h_orientation(f, N, N_prime)
    if h_range is None:
        ends = (Fraction(float(amplitude.h(f, N))), Fraction(float(amplitude.h(f, N_prime))))
        h_range = (min(ends), max(ends))
    a, b = h_range
    if arc.left < a or arc.right > b:
        raise NoSolutionError(f"arc [{arc.left}, {arc.right}) leaves the h-range [{a}, {b})")

    bracket = (float(N), float(N_prime))
    # h decreasing: a = h(N') and b = h(N)
    edge_to_x = {a: float(N_prime) if orientation < 0 else float(N),
                 b: float(N) if orientation < 0 else float(N_prime)}

    def to_x(y: Fraction) -> float:
        if y in edge_to_x:
            return edge_to_x[y]
        return _inverse(f, y, bracket)

    x_left, x_right = to_x(arc.left), to_x(arc.right)
    lo, hi = (x_right, x_left) if orientation < 0 else (x_left, x_right)
    try:
        x0 = _inverse(f, arc.center, bracket)
    except NoSolutionError:
        # owners of clipped arcs may sit outside the working range
        x0 = lo if arc.center < arc.left else hi
    return ProjectedInterval(arc=arc, x0=x0, lo=lo, hi=hi)


def h_interval(f: AmplitudeFunction, N: float, N_prime: float) -> Tuple[Fraction, Fraction]:
    """[a, b) = h-image of (N, N'] as exact Fractions of the float values."""
    ends = (Fraction(float(amplitude.h(f, N))), Fraction(float(amplitude.h(f, N_prime))))
    return min(ends), max(ends)


def dissect_and_project(f: AmplitudeFunction, N: float, N_prime: float, Q: float,
                        workers: int = 1) -> List[ProjectedInterval]:
    """All projected intervals in ascending n order."""
    a, b = h_interval(f, N, N_prime)
    arcs = dissect(a, b, Q)
    if workers > 1 and len(arcs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            intervals = list(executor.map(
                lambda arc: project(arc, f, N, N_prime, Q, (a, b)), arcs))
    else:
        intervals = [project(arc, f, N, N_prime, Q, (a, b)) for arc in arcs]
    intervals.sort(key=lambda iv: iv.lo)
    return intervals


def partition_check(intervals: Sequence[ProjectedInterval], N: int, N_prime: int) -> None:
    """Every integer in (N, N'] lies in exactly one interval, or ConsistencyError."""
    if not intervals:
        if N_prime > N:
            raise ConsistencyError(f"no intervals cover ({N}, {N_prime}]")
        return
    if intervals[0].lo != N or intervals[-1].hi != N_prime:
        raise ConsistencyError(
            f"intervals span ({intervals[0].lo}, {intervals[-1].hi}], expected ({N}, {N_prime}]")
    for left, right in zip(intervals, intervals[1:]):
        if left.hi != right.lo:
            raise ConsistencyError(f"gap or overlap between {left.hi} and {right.lo}")
        if right.hi < right.lo:
            raise ConsistencyError(f"inverted interval ({right.lo}, {right.hi}]")
    total = sum(iv.count() for iv in intervals)
    if total != N_prime - N:
        raise ConsistencyError(f"{total} integers assigned, expected {N_prime - N}")


# ---------------------------------------------------------------------------
# Windows
# ---------------------------------------------------------------------------

def m_normalized(interval: ProjectedInterval, f: AmplitudeFunction, N: float) -> Tuple[float, float]:
    """m1, m2 in units of N^2 / (qQ f(N))."""
    scale = N * N / (interval.arc.q * interval.arc.Q * abs(float(f.derivative(N, 0))))
    return interval.m1 / scale, interval.m2 / scale


def owner_ratio(arc: FareyArc, f: AmplitudeFunction, N: float) -> float:
    """l N / (q f(N)), expected in OWNER_WINDOW."""
    return abs(arc.l) * N / (arc.q * abs(float(f.derivative(N, 0))))


if __name__ == "__main__":
    for arc in dissect(Fraction(1, 4), Fraction(3, 4), 3):
        print(f"{arc.l}/{arc.q}: [{arc.left}, {arc.right})  M1={arc.M1:.3f} M2={arc.M2:.3f}")
    f = amplitude.PowerAmplitude(1.0, 0.95)
    ivs = dissect_and_project(f, 10_000, 20_000, 40)
    partition_check(ivs, 10_000, 20_000)
    print(len(ivs), "intervals partition (10000, 20000]")
