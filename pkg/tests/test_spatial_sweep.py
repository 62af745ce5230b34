from hypothesis import given, settings, strategies as st

from tangency_lab.exact_geom import Point, Q, segment_intersect
from tangency_lab.spatial import HierarchicalGrid, pow2_at_most
from tangency_lab.sweep import intersecting_pairs


def brute(segs):
    return {
        (i, j)
        for i in range(len(segs))
        for j in range(i + 1, len(segs))
        if segment_intersect(segs[i], segs[j]).kind != "empty"
    }


# small integer grids force shared endpoints, collinear overlaps and verticals
coord = st.integers(0, 6).map(Q) | st.fractions(0, 6, max_denominator=3).map(Q)
point = st.builds(Point, coord, coord)
segment = st.tuples(point, point).filter(lambda s: s[0] != s[1])


@settings(max_examples=300, deadline=None)
@given(st.lists(segment, max_size=12))
def test_sweep_matches_brute_force(segs):
    assert intersecting_pairs(segs) == brute(segs)


def test_sweep_degenerate_cases():
    P = lambda x, y: Point(Q(x), Q(y))  # noqa: E731
    star = [(P(0, 0), P(2, 2)), (P(0, 2), P(2, 0)), (P(1, 0), P(1, 2)), (P(0, 1), P(2, 1))]
    assert intersecting_pairs(star) == {(i, j) for i in range(4) for j in range(i + 1, 4)}
    stacked = [(P(0, 0), P(0, 1)), (P(0, 1), P(0, 2)), (P(0, 3), P(0, 4))]
    assert intersecting_pairs(stacked) == {(0, 1)}
    assert intersecting_pairs([]) == set()


@settings(max_examples=100, deadline=None)
@given(st.lists(segment, min_size=1, max_size=15))
def test_grid_candidates_cover_every_true_pair(segs):
    g = HierarchicalGrid(Q(-1), Q(-1), Q(1, 4))
    for i, (a, b) in enumerate(segs):
        g.insert(a, b, i)
    assert brute(segs) <= g.candidate_pairs()


def test_pow2_at_most():
    assert pow2_at_most(Q(1)) == 1
    assert pow2_at_most(Q(3)) == 2
    assert pow2_at_most(Q(1, 3)) == Q(1, 4)
    assert pow2_at_most(Q(1, 4)) == Q(1, 4)
