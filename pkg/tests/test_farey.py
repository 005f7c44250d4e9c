from fractions import Fraction

import pytest

import config
import expsum
import farey
from amplitude import PowerAmplitude
from eigenforms import CoefficientSequence
from errors import ConsistencyError, InvalidArgumentError


def farey_sequence(order):
    return sorted({Fraction(l, q) for q in range(1, order + 1) for l in range(0, q + 1)})


def test_next_farey_walks_the_sequence():
    seq = farey_sequence(7)
    for left, right in zip(seq, seq[1:]):
        assert Fraction(*farey.next_farey(left.numerator, left.denominator, 7)) == right
    with pytest.raises(InvalidArgumentError):
        farey.next_farey(2, 4, 7)


def test_dissect_quarter_to_three_quarters():
    arcs = farey.dissect(Fraction(1, 4), Fraction(3, 4), 3)
    assert [(a.l, a.q) for a in arcs] == [(1, 3), (1, 2), (2, 3)]
    assert [a.left for a in arcs] == [Fraction(1, 4), Fraction(2, 5), Fraction(3, 5)]
    assert arcs[-1].right == Fraction(3, 4)
    assert not any(a.clipped for a in arcs)
    assert all(a.m_window_ok() for a in arcs)
    assert arcs[0].M1 == pytest.approx(0.75)
    assert arcs[1].M1 == pytest.approx(0.6)


def test_dissect_covers_interval_exactly():
    a, b = Fraction(3, 7), Fraction(11, 13)
    arcs = farey.dissect(a, b, 17.5)
    assert arcs[0].left == a and arcs[-1].right == b
    for left, right in zip(arcs, arcs[1:]):
        assert left.right == right.left
    centers = [arc.center for arc in arcs]
    inside = [x for x in farey_sequence(17) if a <= x < b]
    assert set(inside) <= set(centers)


def test_dissect_negative_interval():
    arcs = farey.dissect(Fraction(-3, 4), Fraction(-1, 4), 3)
    assert [(a.l, a.q) for a in arcs] == [(-2, 3), (-1, 2), (-1, 3)]


def test_dissect_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        farey.dissect(1, 1, 5)
    with pytest.raises(InvalidArgumentError):
        farey.dissect(0, 1, 0.5)


def test_projection_partitions_n_range():
    f = PowerAmplitude(j=1.0, gamma=0.95)
    N = 10_000
    intervals = farey.dissect_and_project(f, N, 2 * N, 40)
    farey.partition_check(intervals, N, 2 * N)
    assert intervals[0].lo == N and intervals[-1].hi == 2 * N
    assert sum(iv.count() for iv in intervals) == N


def test_projection_with_threads_matches_serial():
    f = PowerAmplitude(j=2.0, gamma=0.93)
    serial = farey.dissect_and_project(f, 5_000, 9_000, 30)
    threaded = farey.dissect_and_project(f, 5_000, 9_000, 30, workers=4)
    assert [(iv.lo, iv.hi) for iv in serial] == [(iv.lo, iv.hi) for iv in threaded]


def test_partition_check_detects_gap():
    f = PowerAmplitude(j=1.0, gamma=0.95)
    intervals = farey.dissect_and_project(f, 10_000, 20_000, 40)
    with pytest.raises(ConsistencyError):
        farey.partition_check(intervals[:1] + intervals[2:], 10_000, 20_000)
    with pytest.raises(ConsistencyError):
        farey.partition_check([], 10_000, 20_000)


def test_default_q_at_ten_thousand_gives_one_clipped_arc():
    f = PowerAmplitude(j=1.0, gamma=0.95)
    req = expsum.SumRequest(coeff=CoefficientSequence("unit"), f=f, N=10_000, N_prime=20_000)
    intervals = farey.dissect_and_project(f, 10_000, 20_000, req.resolved_Q)
    assert len(intervals) == 1
    assert intervals[0].arc.clipped
    assert (intervals[0].arc.l, intervals[0].arc.q) == (1, 2)


def test_negative_j_partition():
    f = PowerAmplitude(j=-2.0, gamma=0.95)
    intervals = farey.dissect_and_project(f, 10_000, 20_000, 40)
    farey.partition_check(intervals, 10_000, 20_000)
    assert all(iv.arc.l < 0 for iv in intervals)


def test_windows_on_interior_arcs():
    f = PowerAmplitude(j=1.0, gamma=0.95)
    N, Q = 100_000, 200.0
    interior = [iv for iv in farey.dissect_and_project(f, N, 2 * N, Q) if not iv.arc.clipped]
    assert interior
    for iv in interior:
        assert iv.arc.m_window_ok()
        assert max(farey.m_normalized(iv, f, N)) <= config.PROJECTED_M_CONSTANT
        lo, hi = config.OWNER_WINDOW
        assert lo <= farey.owner_ratio(iv.arc, f, N) <= hi
        assert iv.lo <= iv.x0 <= iv.hi


def test_arc_count_matches_density():
    f = PowerAmplitude(j=1.0, gamma=0.95)
    req = expsum.SumRequest(coeff=CoefficientSequence("unit"), f=f, N=100_000,
                            N_prime=200_000, Q=200.0)
    lo, hi = config.ARC_COUNT_WINDOW
    assert lo <= expsum.arc_count_ratio(req) <= hi


def test_arc_count_at_default_level():
    # Q = N^(1/2) / f(N)^(1/3) ~ 8.3 at N = 10^5; h(N, 2N] sits inside the arc of 1/2
    f = PowerAmplitude(j=1.0, gamma=0.95)
    req = expsum.SumRequest(coeff=CoefficientSequence("unit"), f=f, N=100_000, N_prime=200_000)
    assert req.resolved_Q == pytest.approx(8.25, abs=0.05)
    arcs = farey.dissect(*farey.h_interval(f, req.N, req.N_prime), req.resolved_Q)
    assert [(arc.l, arc.q) for arc in arcs] == [(1, 2)]
    assert expsum.predicted_arc_count(req) == pytest.approx(0.358, rel=0.02)
    lo, hi = config.ARC_COUNT_WINDOW
    assert lo <= expsum.arc_count_ratio(req) <= hi
