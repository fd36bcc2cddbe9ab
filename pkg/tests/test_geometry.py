import math

from hypothesis import given
from hypothesis import strategies as st

from gridcast.geometry import (DelayScale, Position, cumulative_distance,
                               cumulative_progress, distance, edge_weight_f)

coord = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False,
                  allow_infinity=False)
point = st.builds(Position, coord, coord)


def test_distance_345():
    assert distance(Position(0, 0), Position(3, 4)) == 5.0


def test_distance_identity():
    assert distance(Position(1, 1), Position(1, 1)) == 0.0


def test_distance_diagonal():
    assert math.isclose(distance(Position(0, 0), Position(1, 1)), math.sqrt(2))


@given(point, point)
def test_distance_symmetric(p, q):
    assert distance(p, q) == distance(q, p)


@given(point, point, point)
def test_distance_triangle_inequality(p, q, r):
    assert distance(p, r) <= distance(p, q) + distance(q, r) + 1e-9


def test_cumulative_distance_single():
    assert cumulative_distance(Position(0, 0), [Position(3, 4)]) == 5.0


def test_cumulative_distance_empty():
    assert cumulative_distance(Position(0, 0), []) == 0.0


def test_cumulative_distance_sum():
    dests = [Position(3, 4), Position(6, 8)]
    assert cumulative_distance(Position(0, 0), dests) == 15.0


def test_cumulative_progress_examples():
    d = [Position(3, 4)]
    assert cumulative_progress(Position(0, 0), Position(3, 4), d) == 5.0
    assert cumulative_progress(Position(1, 2), Position(1, 2), d) == 0.0
    assert cumulative_progress(Position(3, 4), Position(0, 0), d) == -5.0


@given(point, point, st.lists(point, max_size=5))
def test_cumulative_progress_antisymmetric(p, q, dests):
    assert cumulative_progress(p, q, dests) == -cumulative_progress(q, p, dests)


@given(point, point, point, st.lists(point, max_size=5))
def test_cumulative_progress_telescopes(a, b, c, dests):
    ab = cumulative_progress(a, b, dests)
    bc = cumulative_progress(b, c, dests)
    ac = cumulative_progress(a, c, dests)
    assert math.isclose(ab + bc, ac, rel_tol=1e-9, abs_tol=1e-9)


def test_delay_scale_endpoints():
    s = DelayScale(lo=5.0, hi=20.0, top=12.0)
    assert s.apply(5.0) == 0.0
    assert s.apply(20.0) == 12.0
    assert s.apply(12.5) == 6.0


def test_delay_scale_degenerate():
    assert DelayScale(lo=7.0, hi=7.0, top=10.0).apply(7.0) == 0.0


def test_edge_weight_f_vanishes():
    s = DelayScale(lo=1.0, hi=5.0, top=8.0)
    assert edge_weight_f(0.0, 1.0, 1.0, 1.0, s) == 0.0


def test_edge_weight_f_projects_progress_term():
    s = DelayScale(lo=1.0, hi=5.0, top=8.0)
    assert edge_weight_f(3.7, 4.0, 1.0, 0.0, s) == 3.7


def test_edge_weight_f_sum():
    # scaled delay of 4.0 under lo=1, hi=5, top=8 is 6.0
    s = DelayScale(lo=1.0, hi=5.0, top=8.0)
    assert edge_weight_f(4.0, 4.0, 1.0, 1.0, s) == 10.0
