"""Exact certification of curve families.

All intersections between polylines are found by an exact plane sweep
followed by exact segment tests. Each isolated common point is then
classified by the cyclic angular order of the branches leaving it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cmp_to_key

from .curves import BLUE, RED, Curve, CurveFamily
from .exact_geom import Point, Polyline, angle_key_cmp, on_segment, same_direction, segment_intersect
from .sweep import intersecting_pairs

CROSSING = "crossing"
TOUCHING = "touching"
OVERLAP = "overlap"
ENDPOINT = "endpoint_contact"


class NonSimpleError(ValueError):
    def __init__(self, curve_id, i, j, where):
        self.curve_id, self.segments, self.where = curve_id, (i, j), where
        super().__init__(f"curve {curve_id} is not simple: segments {i} and {j} meet at {where}")


@dataclass(frozen=True)
class IntersectionEvent:
    curve_a: int
    curve_b: int
    point: Point
    kind: str
    until: Point | None = None  # far end of an overlap

    def to_json(self) -> dict:
        d = {"curve_a": self.curve_a, "curve_b": self.curve_b, "point": self.point.to_json(), "kind": self.kind}
        if self.until is not None:
            d["until"] = self.until.to_json()
        return d


# ---------------------------------------------------------------- engine

def _touching_pairs(segs):
    """Index pairs (i < j) of segments with a common point."""
    if len(segs) < 2:
        return set()
    return intersecting_pairs(segs)


def _raw_hits(polys):
    """Exact segment-level hits across a list of polylines.

    Returns {(ci, cj): [(si, sj, IntersectionResult)]} with ci <= cj.
    Adjacent segments of one polyline sharing only their common vertex are
    not reported.
    """
    owner, segs = [], []
    for ci, poly in enumerate(polys):
        vs = poly.vertices
        for si in range(len(vs) - 1):
            owner.append((ci, si))
            segs.append((vs[si], vs[si + 1]))
    hits = defaultdict(list)
    for i, j in sorted(_touching_pairs(segs)):
        ci, si = owner[i]
        cj, sj = owner[j]
        res = segment_intersect(segs[i], segs[j])
        if res.kind == "empty":
            continue
        if ci == cj and abs(si - sj) == 1 and res.kind == "point":
            shared = segs[i][1] if si < sj else segs[i][0]
            if res.point == shared:
                continue
        hits[(ci, cj)].append((si, sj, res))
    return hits


def _branches(vs, p, si):
    """Directions leaving p along a polyline, given a segment index containing p.

    Returns (directions, is_endpoint).
    """
    last = len(vs) - 1
    if p == vs[si]:
        i = si
    elif p == vs[si + 1]:
        i = si + 1
    else:
        a, b = vs[si], vs[si + 1]
        return [(a[0] - p[0], a[1] - p[1]), (b[0] - p[0], b[1] - p[1])], False
    dirs = []
    if i > 0:
        dirs.append((vs[i - 1][0] - p[0], vs[i - 1][1] - p[1]))
    if i < last:
        dirs.append((vs[i + 1][0] - p[0], vs[i + 1][1] - p[1]))
    return dirs, i == 0 or i == last


_angle_key = cmp_to_key(angle_key_cmp)


def classify_point(va, sa, vb, sb, p) -> str:
    da, end_a = _branches(va, p, sa)
    db, end_b = _branches(vb, p, sb)
    for u in da:
        for v in db:
            if same_direction(u, v):
                return OVERLAP
    if end_a or end_b:
        return ENDPOINT
    labelled = sorted([(d, 0) for d in da] + [(d, 1) for d in db], key=lambda t: _angle_key(t[0]))
    labels = [t[1] for t in labelled]
    alternating = all(labels[i] != labels[(i + 1) % 4] for i in range(4))
    return CROSSING if alternating else TOUCHING


def _events_for_pair(ida, va, idb, vb, raw):
    """Turn the raw hits of one curve pair into classified events."""
    events = []
    overlaps = []
    points = {}
    for si, sj, res in raw:
        if res.kind == "overlap":
            overlaps.append(res.segment)
            events.append(IntersectionEvent(ida, idb, res.segment.a, OVERLAP, res.segment.b))
        else:
            points.setdefault(res.point, (si, sj))
    for p in sorted(points):
        if any(on_segment(p, s) for s in overlaps):
            continue
        si, sj = points[p]
        events.append(IntersectionEvent(ida, idb, p, classify_point(va, si, vb, sj, p)))
    return events


def _check_simple(cid, vs, raw):
    for si, sj, res in raw:
        where = res.point if res.kind == "point" else res.segment
        raise NonSimpleError(cid, min(si, sj), max(si, sj), where)


def _as_vertices(obj):
    if isinstance(obj, Curve):
        return obj.vertices
    if isinstance(obj, Polyline):
        return obj.vertices
    return Polyline(tuple(obj)).vertices


def pair_intersections(a, b, id_a: int = 0, id_b: int = 1) -> list:
    """Classified common points of two simple polylines."""
    va, vb = _as_vertices(a), _as_vertices(b)
    hits = _raw_hits([Polyline(va), Polyline(vb)])
    _check_simple(id_a, va, hits.get((0, 0), []))
    _check_simple(id_b, vb, hits.get((1, 1), []))
    return _events_for_pair(id_a, va, id_b, vb, hits.get((0, 1), []))


def assert_simple(poly, cid: int = 0) -> None:
    vs = _as_vertices(poly)
    _check_simple(cid, vs, _raw_hits([Polyline(vs)]).get((0, 0), []))


def all_events(family: CurveFamily) -> dict:
    """{(id_a, id_b): [events]} over every curve pair with a common point."""
    curves = family.curves
    hits = _raw_hits([c.polyline for c in curves])
    out = {}
    for (ci, cj), raw in sorted(hits.items()):
        if ci == cj:
            _check_simple(curves[ci].id, curves[ci].vertices, raw)
            continue
        a, b = curves[ci], curves[cj]
        out[(a.id, b.id)] = _events_for_pair(a.id, a.vertices, b.id, b.vertices, raw)
    return out


# ---------------------------------------------------------------- reports

@dataclass
class TangencyReport:
    tangent_pairs: list = field(default_factory=list)  # (red_id, blue_id, Point)
    crossing_pair_count: int = 0
    same_color_violations: list = field(default_factory=list)
    overlap_violations: list = field(default_factory=list)
    total_tangencies: int = 0
    endpoint_contacts: int = 0
    max_events_per_pair: int = 0

    @property
    def ok(self) -> bool:
        return not self.same_color_violations and not self.overlap_violations

    def pair_set(self) -> set:
        return {(a, b) for a, b, _ in self.tangent_pairs}

    def to_json(self) -> dict:
        return {
            "total_tangencies": self.total_tangencies,
            "crossing_pair_count": self.crossing_pair_count,
            "endpoint_contacts": self.endpoint_contacts,
            "max_events_per_pair": self.max_events_per_pair,
            "tangent_pairs": [[a, b, p.to_json()] for a, b, p in self.tangent_pairs],
            "same_color_violations": [e.to_json() for e in self.same_color_violations],
            "overlap_violations": [e.to_json() for e in self.overlap_violations],
        }

    @staticmethod
    def from_json(d: dict) -> "TangencyReport":
        def ev(e):
            u = e.get("until")
            return IntersectionEvent(
                int(e["curve_a"]), int(e["curve_b"]), Point.from_json(e["point"]), e["kind"],
                None if u is None else Point.from_json(u),
            )
        return TangencyReport(
            tangent_pairs=[(int(a), int(b), Point.from_json(p)) for a, b, p in d["tangent_pairs"]],
            crossing_pair_count=int(d["crossing_pair_count"]),
            same_color_violations=[ev(e) for e in d["same_color_violations"]],
            overlap_violations=[ev(e) for e in d["overlap_violations"]],
            total_tangencies=int(d["total_tangencies"]),
            endpoint_contacts=int(d.get("endpoint_contacts", 0)),
            max_events_per_pair=int(d.get("max_events_per_pair", 0)),
        )


def tangency_report(family: CurveFamily) -> TangencyReport:
    """Certify tangencies from geometry alone; declared tangencies are ignored."""
    colors = {c.id: c.color for c in family.curves}
    rep = TangencyReport()
    for (ia, ib), events in all_events(family).items():
        if not events:
            continue
        rep.max_events_per_pair = max(rep.max_events_per_pair, len(events))
        rep.overlap_violations.extend(e for e in events if e.kind == OVERLAP)
        if colors[ia] == colors[ib]:
            rep.same_color_violations.extend(events)
            continue
        rep.endpoint_contacts += sum(e.kind == ENDPOINT for e in events)
        if any(e.kind == CROSSING for e in events):
            rep.crossing_pair_count += 1
        if len(events) == 1 and events[0].kind == TOUCHING:
            red, blue = (ia, ib) if colors[ia] == RED else (ib, ia)
            rep.tangent_pairs.append((red, blue, events[0].point))
    rep.tangent_pairs.sort(key=lambda t: (t[0], t[1]))
    rep.total_tangencies = len(rep.tangent_pairs)
    return rep


@dataclass
class GroundedReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_grounded(family: CurveFamily) -> GroundedReport:
    rep = GroundedReport()
    if not family.grounded or family.strip is None:
        rep.violations.append("family is not marked grounded or has no strip")
        return rep
    left, right = family.strip
    for c in family.curves:
        xs = [v[0] for v in c.vertices]
        if min(xs) < left or max(xs) > right:
            rep.violations.append(f"curve {c.id} leaves the strip")
        target = left if c.color == RED else right
        side = "left" if c.color == RED else "right"
        if target not in xs:
            rep.violations.append(f"{c.color} curve {c.id} does not touch the {side} boundary")
    return rep


def is_x_monotone(poly) -> bool:
    vs = _as_vertices(poly) if not isinstance(poly, (list, tuple)) else poly
    return all(vs[i][0] < vs[i + 1][0] for i in range(len(vs) - 1))


def below_line_violations(family: CurveFamily, lines) -> list:
    """Red curves with a vertex strictly above their source line."""
    out = []
    for c in family.reds():
        l = lines[c.source]
        for v in c.vertices:
            if l.side(v) > 0:
                out.append((c.id, v))
                break
    return out


def declared_pairs(family: CurveFamily) -> set:
    out = set()
    for c in family.curves:
        for other, _ in c.declared_tangencies:
            out.add((c.id, other) if c.color == RED else (other, c.id))
    return out
