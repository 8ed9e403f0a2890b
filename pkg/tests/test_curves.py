import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frechet_jl import Curve, Interval, Segment, ball_segment_intersection, make_curve
from frechet_jl import point_on_segment, point_segment_distance, subcurve
from frechet_jl.errors import DegenerateCurve, DimensionMismatch

SEG = Segment.of((0, 0), (2, 0))
coord = st.floats(-10, 10, allow_nan=False)


def test_make_curve_normalize_drops_collinear():
    c = make_curve([(0, 0), (1, 0), (2, 0), (2, 1)], normalize=True)
    assert c.vertices.tolist() == [[0, 0], [2, 0], [2, 1]]


def test_make_curve_default_keeps_collinear():
    assert len(make_curve([(0, 0), (1, 0), (2, 0), (2, 1)])) == 4


def test_make_curve_drops_duplicates():
    assert make_curve([(0, 0), (0, 0), (1, 1)]).vertices.tolist() == [[0, 0], [1, 1]]


def test_make_curve_errors():
    with pytest.raises(DegenerateCurve):
        make_curve([(0, 0)])
    with pytest.raises(DegenerateCurve):
        make_curve([(1, 1), (1, 1)])
    with pytest.raises(DimensionMismatch):
        make_curve([(0, 0), (1, 1, 1)])


def test_curve_is_read_only():
    c = Curve([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        c.vertices[0, 0] = 5.0


def test_curve_edges_are_one_based():
    c = Curve([(0, 0), (1, 0), (1, 1)])
    assert np.array_equal(c.edge(2).a, [1, 0])
    with pytest.raises(IndexError):
        c.edge(3)
    assert c.arclength() == pytest.approx(2.0)


@pytest.mark.parametrize("lam, expected", [(0.5, (1, 0)), (0.0, (0, 0)), (2.0, (4, 0))])
def test_point_on_segment(lam, expected):
    assert np.allclose(point_on_segment(SEG, lam), expected)


def test_subcurve():
    c = Curve([(0, 0), (1, 0), (1, 1), (2, 1)], id="c")
    assert np.array_equal(subcurve(c, 1, 4).vertices, c.vertices)
    assert subcurve(c, 2, 3).vertices.tolist() == [[1, 0], [1, 1]]
    for i, j in [(3, 2), (0, 2), (2, 5), (2, 2)]:
        with pytest.raises(IndexError):
            subcurve(c, i, j)


def test_point_segment_distance_examples():
    s = Segment.of((-1, 0), (1, 0))
    assert point_segment_distance((0, 1), s) == 1.0
    assert point_segment_distance((2, 0), s) == 1.0
    tiny = Segment.of((0, 0), (1e-30, 0))
    assert point_segment_distance((3, 4), tiny) == pytest.approx(5.0)
    with pytest.raises(DimensionMismatch):
        point_segment_distance((1, 2, 3), s)


def test_ball_segment_examples():
    assert ball_segment_intersection(SEG, (1, 1), math.sqrt(2)) == Interval(0.0, 1.0)
    assert ball_segment_intersection(SEG, (1, 1), 1.0) == Interval(0.5, 0.5)
    assert not ball_segment_intersection(SEG, (1, 1), 0.5)


def test_ball_segment_endpoint_touch():
    iv = ball_segment_intersection(SEG, (3, 0), 1.0)
    assert iv == Interval(1.0, 1.0)
    iv = ball_segment_intersection(SEG, (-1, 0), 1.0)
    assert iv == Interval(0.0, 0.0)


def test_ball_degenerate_segment():
    s = Segment.of((1, 1), (1, 1))
    assert ball_segment_intersection(s, (1, 2), 1.0) == Interval(0.0, 1.0)
    assert not ball_segment_intersection(s, (1, 3), 1.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(coord, min_size=6, max_size=6))
def test_point_segment_distance_matches_grid(v):
    p, a, b = np.array(v[:2]), np.array(v[2:4]), np.array(v[4:])
    lam = np.linspace(0, 1, 10001)
    pts = a[None, :] + lam[:, None] * (b - a)[None, :]
    grid = np.linalg.norm(pts - p, axis=1).min()
    d = point_segment_distance(p, Segment(a, b))
    step = np.linalg.norm(b - a) * 1e-4
    assert d <= grid + 1e-9
    assert d >= grid - step - 1e-9


@settings(max_examples=100, deadline=None)
@given(st.lists(coord, min_size=6, max_size=6), st.floats(0, 15))
def test_ball_nonempty_iff_close(v, r):
    p, a, b = np.array(v[:2]), np.array(v[2:4]), np.array(v[4:])
    s = Segment(a, b)
    iv = ball_segment_intersection(s, p, r)
    d = point_segment_distance(p, s)
    if iv:
        assert d <= r + 1e-9
        for t in (iv.lo, iv.hi):
            assert np.linalg.norm(point_on_segment(s, t) - p) <= r + 1e-7
    else:
        assert d > r - 1e-9


@settings(max_examples=60, deadline=None)
@given(st.lists(coord, min_size=4, max_size=4), st.floats(-3, 3))
def test_point_on_segment_is_affine(v, lam):
    a, b = np.array(v[:2]), np.array(v[2:])
    mat = np.array([[2.0, -1.0], [0.5, 3.0]])
    lhs = mat @ point_on_segment(Segment(a, b), lam)
    rhs = point_on_segment(Segment(mat @ a, mat @ b), lam)
    assert np.allclose(lhs, rhs, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=2, max_size=8))
def test_normalized_curve_has_no_collinear_interior(pts):
    try:
        c = make_curve(pts, normalize=True)
    except DegenerateCurve:
        return
    v = c.vertices
    tol = 1e-12 * float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))
    for k in range(1, len(v) - 1):
        assert point_segment_distance(v[k], Segment(v[k - 1], v[k + 1])) > tol
