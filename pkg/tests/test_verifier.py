import json

import pytest
from hypothesis import given, settings, strategies as st

from tangency_lab.curves import BLUE, RED, Box, Curve, CurveFamily
from tangency_lab.exact_geom import Point, Polyline, Q
from tangency_lab.incidence import generate_grid_system, shear_normalize
from tangency_lab.synthesis import synthesize
from tangency_lab.verifier import (
    CROSSING,
    ENDPOINT,
    OVERLAP,
    TOUCHING,
    NonSimpleError,
    TangencyReport,
    assert_simple,
    is_x_monotone,
    pair_intersections,
    tangency_report,
    verify_grounded,
)


def P(x, y):
    return Point(Q(x), Q(y))


def poly(*pts):
    return Polyline(tuple(P(*p) for p in pts))


def family(curves, box=(-10, 10, -10, 10), **kw):
    cs = [Curve(color, poly(*pts), i) for i, (color, pts) in enumerate(curves)]
    return CurveFamily(cs, Box(*(Q(v) for v in box)), **kw)


def test_x_shape_is_a_crossing():
    ev = pair_intersections(poly((0, 0), (2, 2)), poly((0, 2), (2, 0)))
    assert [(e.kind, e.point) for e in ev] == [(CROSSING, P(1, 1))]


def test_v_on_a_line_is_a_touching():
    ev = pair_intersections(poly((0, 0), (1, 1), (2, 0)), poly((0, 1), (2, 1)))
    assert [(e.kind, e.point) for e in ev] == [(TOUCHING, P(1, 1))]


def test_zigzag_through_a_line_is_a_crossing():
    ev = pair_intersections(poly((0, 0), (1, 1), (2, 2)), poly((0, 1), (1, 1), (2, 1)))
    assert [e.kind for e in ev] == [CROSSING]


def test_shared_segment_is_an_overlap():
    ev = pair_intersections(poly((0, 0), (2, 0)), poly((1, 0), (3, 0)))
    assert [e.kind for e in ev] == [OVERLAP]
    assert {ev[0].point, ev[0].until} == {P(1, 0), P(2, 0)}


def test_endpoint_contact_is_separate():
    ev = pair_intersections(poly((0, 0), (1, 1)), poly((1, 1), (2, 0)))
    assert [e.kind for e in ev] == [ENDPOINT]


def test_self_intersection_raises():
    with pytest.raises(NonSimpleError) as err:
        assert_simple(poly((0, 0), (2, 2), (2, 0), (0, 2)), cid=7)
    assert err.value.curve_id == 7 and err.value.segments == (0, 2)


def test_same_color_contact_is_a_violation():
    f = family([(RED, [(0, 0), (2, 2)]), (RED, [(0, 2), (2, 0)]), (BLUE, [(5, 5), (6, 6)])])
    rep = tangency_report(f)
    assert not rep.ok and len(rep.same_color_violations) == 1


def test_two_disjoint_reds_give_empty_report():
    rep = tangency_report(family([(RED, [(0, 0), (1, 0)]), (RED, [(0, 1), (1, 1)])]))
    assert rep.ok and rep.total_tangencies == 0 and rep.tangent_pairs == []


def test_multiple_contacts_do_not_count_as_tangency():
    # a W touching a line twice
    f = family([(RED, [(0, 0), (1, 1), (2, 0), (3, 1), (4, 0)]), (BLUE, [(0, 1), (4, 1)])])
    rep = tangency_report(f)
    assert rep.total_tangencies == 0 and rep.max_events_per_pair == 2


def test_tangency_and_crossing_counts():
    f = family([
        (RED, [(0, 0), (1, 1), (2, 0)]),
        (BLUE, [(0, 1), (2, 1)]),
        (BLUE, [(0, 2), (2, -2)]),
    ])
    rep = tangency_report(f)
    assert rep.pair_set() == {(0, 1)}
    assert rep.crossing_pair_count == 1  # blue-blue contact is a violation, not a crossing pair
    assert len(rep.same_color_violations) == 1


def test_report_json_round_trip():
    f = synthesize(shear_normalize(generate_grid_system(2)))
    rep = tangency_report(f)
    again = TangencyReport.from_json(json.loads(json.dumps(rep.to_json())))
    assert again == rep


def test_declared_tangencies_are_ignored():
    f = synthesize(shear_normalize(generate_grid_system(1)))
    base = tangency_report(f)
    for c in f.curves:
        c.declared_tangencies = []
    assert tangency_report(f) == base


@settings(max_examples=30, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.fractions(-3, 3))
def test_reports_are_translation_invariant(dx, dy, sx):
    f = synthesize(shear_normalize(generate_grid_system(1)))
    base = tangency_report(f)
    moved = CurveFamily(
        [Curve(c.color, Polyline(tuple(Point(v.x + dx + Q(sx), v.y + dy) for v in c.vertices)), c.source, [], c.id)
         for c in f.curves],
        Box(f.box.xmin + dx + Q(sx), f.box.xmax + dx + Q(sx), f.box.ymin + dy, f.box.ymax + dy),
    )
    rep = tangency_report(moved)
    assert rep.pair_set() == base.pair_set()
    assert rep.crossing_pair_count == base.crossing_pair_count


def test_grounded_check_names_the_offending_curve():
    f = family(
        [(RED, [(0, 0), (3, 0)]), (BLUE, [(1, -1), (1, 2), (3, 2)]), (BLUE, [(2, -1), (2, 1), (2, 3)])],
        box=(-1, 5, -5, 5), strip=(Q(0), Q(3)), grounded=True,
    )
    rep = verify_grounded(f)
    assert rep.violations == ["blue curve 2 does not touch the right boundary"]


def test_grounded_check_flags_leaving_the_strip_and_ungrounded_input():
    f = family([(RED, [(-1, 0), (3, 0)])], strip=(Q(0), Q(3)), grounded=True)
    assert "curve 0 leaves the strip" in verify_grounded(f).violations
    g = family([(RED, [(0, 0), (3, 0)])])
    assert not verify_grounded(g).ok


def test_x_monotone_examples():
    assert is_x_monotone(poly((0, 0), (1, 5), (2, -1)))
    assert not is_x_monotone(poly((0, 0), (1, 0), (1, 1)))
    assert not is_x_monotone(poly((0, 0), (2, 0), (1, 1)))
