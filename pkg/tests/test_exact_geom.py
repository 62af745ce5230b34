from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, strategies as st

from tangency_lab.exact_geom import (
    EMPTY,
    Line,
    Point,
    Polyline,
    Q,
    angle_key_cmp,
    fmt,
    isqrt_floor_rational,
    line_crossing,
    line_second_circle_intersection,
    on_circle,
    orient,
    segment_intersect,
)


def P(x, y):
    return Point(Q(x), Q(y))


def test_rational_parsing_and_formatting():
    assert Q("3/6") == gmpy2.mpq(1, 2)
    assert Q(Fraction(2, 4)) == Q(1, 2)
    assert Q(-7) == gmpy2.mpq(-7)
    assert fmt(Q(3)) == "3/1"
    assert fmt(Q("-4/6")) == "-2/3"
    with pytest.raises((TypeError, ValueError)):
        Q(0.5)


def test_point_json_round_trip():
    p = P("1/3", -2)
    assert p.to_json() == ["1/3", "-2/1"]
    assert Point.from_json(p.to_json()) == p


def test_orient_examples():
    assert orient(P(0, 0), P(1, 0), P(0, 1)) == 1
    assert orient(P(0, 0), P(1, 1), P(2, 2)) == 0
    assert orient(P(0, 0), P(0, 1), P(1, 0)) == -1


def test_segment_intersect_examples():
    x = segment_intersect((P(0, 0), P(2, 2)), (P(0, 2), P(2, 0)))
    assert x.kind == "point" and x.point == P(1, 1)
    assert segment_intersect((P(0, 0), P(1, 0)), (P(0, 1), P(1, 1))) == EMPTY
    o = segment_intersect((P(0, 0), P(2, 0)), (P(1, 0), P(3, 0)))
    assert o.kind == "overlap"
    assert {o.segment[0], o.segment[1]} == {P(1, 0), P(2, 0)}


def test_segment_intersect_endpoint_touch_and_collinear_gap():
    t = segment_intersect((P(0, 0), P(1, 1)), (P(1, 1), P(2, 0)))
    assert t.kind == "point" and t.point == P(1, 1)
    assert segment_intersect((P(0, 0), P(1, 0)), (P(2, 0), P(3, 0))).kind == "empty"
    single = segment_intersect((P(0, 0), P(1, 0)), (P(1, 0), P(3, 0)))
    assert single.kind == "point" and single.point == P(1, 0)


coord = st.integers(-4, 4)
seg = st.tuples(coord, coord, coord, coord).filter(lambda t: t[:2] != t[2:])


@given(seg, seg)
def test_segment_intersect_is_symmetric(a, b):
    s = (P(a[0], a[1]), P(a[2], a[3]))
    t = (P(b[0], b[1]), P(b[2], b[3]))
    assert segment_intersect(s, t) == segment_intersect(t, s)
    assert segment_intersect(s, t) == segment_intersect((s[1], s[0]), t)


@given(seg, seg)
def test_intersection_point_lies_on_both(a, b):
    s = (P(a[0], a[1]), P(a[2], a[3]))
    t = (P(b[0], b[1]), P(b[2], b[3]))
    r = segment_intersect(s, t)
    if r.kind == "point":
        assert orient(s[0], s[1], r.point) == 0
        assert orient(t[0], t[1], r.point) == 0


def test_second_circle_intersection_examples():
    assert line_second_circle_intersection(P(0, 1), 1, P(0, 0), 1) == P(1, 1)
    for s in ("1/2", 2, 3, "-3/7"):
        q = line_second_circle_intersection(P(0, 1), 1, P(0, 0), Q(s))
        assert on_circle(q, P(0, 1), 1)
        assert Line(Q(s), Q(0)).contains(q)


def test_second_circle_intersection_rejects_degenerate_input():
    with pytest.raises(ValueError):
        line_second_circle_intersection(P(0, 1), 1, P(0, 0), 0)
    with pytest.raises(ValueError):
        line_second_circle_intersection(P(0, 1), 1, P(1, 0), 1)
    with pytest.raises(ValueError):
        line_second_circle_intersection(P(0, 1), 0, P(0, 1), 1)


def test_line_helpers():
    l1, l2 = Line(Q(1), Q(0)), Line(Q(-1), Q(2))
    assert line_crossing(l1, l2) == P(1, 1)
    assert line_crossing(l1, Line(Q(1), Q(5))) is None
    assert l1.side(P(0, 1)) == 1 and l1.side(P(0, -1)) == -1 and l1.side(P(3, 3)) == 0


def test_polyline_validation():
    Polyline((P(0, 0), P(1, 0), P(1, 1)))
    with pytest.raises(ValueError):
        Polyline((P(0, 0),))
    with pytest.raises(ValueError):
        Polyline((P(0, 0), P(0, 0), P(1, 1)))
    with pytest.raises(ValueError):
        Polyline((P(0, 0), P(2, 0), P(1, 0)))


def test_angle_order_is_counterclockwise_from_east():
    dirs = [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1), (1, -1)]
    import functools

    assert sorted(reversed(dirs), key=functools.cmp_to_key(angle_key_cmp)) == dirs


@given(st.fractions(min_value=0, max_value=1000))
def test_isqrt_floor_is_a_tight_lower_bound(f):
    q = Q(f)
    lb = isqrt_floor_rational(q)
    assert lb * lb <= q
    step = gmpy2.mpq(1, 1 << 20)
    assert (lb + step) * (lb + step) > q
