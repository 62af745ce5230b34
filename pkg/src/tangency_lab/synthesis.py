"""Turn a point-line system into red and blue curve families whose
tangencies realize every incidence.

Blue curves are inscribed polygons hanging from a vertical stick. Red curves
follow their lines, hug each incident disk from outside and touch it at the
anchor. Whenever a red curve would cross an earlier red curve it instead
follows that curve's remainder inside a thin tube, around its far end and
back, rejoining its own route on the other side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key

from .curves import BLUE, RED, Box, Curve, CurveFamily
from .exact_geom import (
    Point,
    Polyline,
    Q,
    angle_key_cmp,
    cross,
    dist2,
    dot,
    isqrt_floor_rational,
    is_backtrack,
    line_crossing,
    line_second_circle_intersection,
    on_circle,
    orient,
    segment_intersect,
)
from .incidence import PointLineSystem, crossings, line_order_at, verify_general_position
from .spatial import HierarchicalGrid, pow2_at_most


class RoutingError(RuntimeError):
    """Construction could not keep a corridor clear; names the features involved."""

    def __init__(self, msg, features=None):
        self.features = features
        super().__init__(msg)


@dataclass(frozen=True)
class DiskSpec:
    point_index: int
    center: Point
    radius: object
    anchors: tuple  # ((line_index, Point), ...) by line index
    filler_vertices: tuple


@dataclass
class RoutingParams:
    base_offset: object
    per_curve_offset: dict
    min_feature_gap: object
    depth: dict = field(default_factory=dict)  # (line, point) -> hug depth
    leads: bool = True
    tail: str = "short"  # "short" ends past the last anchor, "box" at the right side


# ---------------------------------------------------------------- box and radius

def compute_box(sys: PointLineSystem, margin=1) -> Box:
    margin = Q(margin)
    xs = [p.x for p in sys.points]
    ys = [p.y for p in sys.points]
    for _, _, c in crossings(sys.lines):
        xs.append(c.x)
        ys.append(c.y)
    if not xs:
        xs, ys = [Q(0)], [Q(0)]
    xmin, xmax = min(xs) - margin, max(xs) + margin
    for l in sys.lines:
        ys.extend((l.at(xmin), l.at(xmax)))
    return Box(xmin, xmax, min(ys) - margin, max(ys) + margin)


def _sqrt_lb(q):
    return isqrt_floor_rational(q)


def choose_disk_radius(sys: PointLineSystem, box: Box):
    """Half of the tightest of the separation bounds."""
    pts = sys.points
    if len(set(pts)) != len(pts):
        raise ValueError("degenerate system: coincident points")
    bounds = []
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            bounds.append(_sqrt_lb(dist2(pts[a], pts[b])) / 4)  # disjoint disks
            dx = abs(pts[a].x - pts[b].x)
            if dx > 0:
                bounds.append(dx / 2)  # a stick never meets another disk
    incident = set(sys.incidences)
    for li, l in enumerate(sys.lines):
        for pi, p in enumerate(pts):
            if (li, pi) in incident:
                continue
            d = l.at(p.x) - p.y
            bounds.append(_sqrt_lb(d * d / (1 + l.slope * l.slope)) / 2)
    for p in pts:
        bounds.extend((p.x - box.xmin, box.xmax - p.x, p.y - box.ymin, (box.ymax - p.y) / 2))
    cross_pts = {c for _, _, c in crossings(sys.lines)}
    for p in pts:
        for c in cross_pts:
            if c != p:
                bounds.append(_sqrt_lb(dist2(p, c)) / 2)
    bounds = [b for b in bounds if b > 0]
    if not bounds:
        return Q(1, 2)
    return min(bounds) / 2


# ---------------------------------------------------------------- blue curves

FILLER_SLOPES = tuple(Q(s) for s in ("1/4", "1/2", "1", "2", "4", "-4", "-2", "-1", "-1/2", "-1/4"))


def _ccw_from_bottom_key(center):
    """Counterclockwise angle of p around center, measured from straight down."""
    def key(p):
        # a quarter turn maps the downward direction onto the x-axis
        return cmp_to_key(angle_key_cmp)((center.y - p.y, p.x - center.x))
    return key


def disk_polygon(center: Point, r, extra_points=()) -> list:
    """Inscribed convex polygon, vertices listed counterclockwise starting at the top."""
    base = Point(center.x, center.y - r)
    top = Point(center.x, center.y + r)
    pts = {base, top}
    for s in FILLER_SLOPES:
        pts.add(line_second_circle_intersection(center, r, base, s))
    pts.update(extra_points)
    for p in pts:
        assert on_circle(p, center, r)
    ordered = sorted(pts, key=_ccw_from_bottom_key(center))
    i = ordered.index(top)
    return ordered[i:] + ordered[:i]


def synth_blue_curves(sys: PointLineSystem, box: Box, r, first_id: int = 0):
    r = Q(r)
    by_point = {}
    for li, pi in sys.incidences:
        by_point.setdefault(pi, []).append(li)
    curves, disks = [], []
    for pi, p in enumerate(sys.points):
        center = Point(p.x, p.y + r)
        anchors = []
        for li in sorted(by_point.get(pi, [])):
            a = line_second_circle_intersection(center, r, p, sys.lines[li].slope)
            anchors.append((li, a))
        if len({a for _, a in anchors}) != len(anchors):
            raise ValueError(f"anchor collision at point {pi}")
        _assert_ccw(center, [a for _, a in anchors], pi)
        poly = disk_polygon(center, r, [a for _, a in anchors])
        anchor_set = {a for _, a in anchors}
        filler = tuple(v for v in poly if v not in anchor_set and v != p)
        disks.append(DiskSpec(pi, center, r, tuple(anchors), filler))
        # clockwise from the top's right neighbour, back to the top, then up the stick
        verts = list(reversed(poly[1:])) + [poly[0], Point(center.x, box.ymax)]
        curves.append(Curve(BLUE, Polyline(tuple(verts)), pi, [], first_id + pi))
    return curves, disks


def _assert_ccw(center, anchors, pi):
    key = _ccw_from_bottom_key(center)
    ks = [key(a) for a in anchors]
    for a, b in zip(ks, ks[1:]):
        if not a < b:
            raise AssertionError(f"anchors at point {pi} are not counterclockwise in line order")


# ---------------------------------------------------------------- intended routes

def _l1(u):
    return abs(u[0]) + abs(u[1])


def _left_normal(u):
    s = _l1(u)
    return (-u[1] / s, u[0] / s)


def hug(center: Point, r, slope, depth):
    """Vertices before the anchor, the anchor, and vertices after it.

    Positive slope: leave the line at height y_p - depth, run under the disk
    and climb the tangent at the anchor. Negative slope: the mirror image,
    touching first and rejoining the line after the base point.
    """
    p = Point(center.x, center.y - r)
    s = Q(slope)
    anchor = line_second_circle_intersection(center, r, p, s)
    w = Point(p.x + r * s, p.y)  # tangents at base and anchor meet here
    lam = depth / (anchor.y - p.y)
    w2 = Point(w.x + lam * (w.x - anchor.x), p.y - depth)
    on_line = Point(p.x - depth / s, p.y - depth)
    if s > 0:
        return [on_line, w2], anchor, []
    return [], anchor, [w2, on_line]


@dataclass
class Route:
    vertices: list
    anchors: dict  # vertex index -> point index


def assign_depths(sys: PointLineSystem, r, order) -> dict:
    """Hug depth per incidence; later curves at a disk dig deeper but start
    further right, so their hugs enclose earlier ones."""
    rank = {li: t for t, li in enumerate(order)}
    by_point = {}
    for li, pi in sys.incidences:
        by_point.setdefault(pi, []).append(li)
    kmax = max((len(v) for v in by_point.values()), default=0) + 1
    depth = {}
    for pi, lis in by_point.items():
        lis.sort(key=lambda li: rank[li])
        prev = None
        for t, li in enumerate(lis, start=1):
            q = Q(1, 4) * (1 - Q(t, 4 * kmax))
            e = r * abs(sys.lines[li].slope) * q
            if prev is not None and not e > prev:
                raise RoutingError(f"hug depths at point {pi} are not increasing", (li, pi))
            depth[(li, pi)] = e
            prev = e
    return depth


def intended_route(sys, box, r, li, depth, lead_height=None, slant=None, tail="short") -> Route:
    line = sys.lines[li]
    pis = sorted((pi for l2, pi in sys.incidences if l2 == li), key=lambda pi: sys.points[pi].x)
    verts, anchors = [], {}
    if not pis:
        return Route([Point(box.xmin, line.at(box.xmin)), Point(box.xmax, line.at(box.xmax))], {})
    for n, pi in enumerate(pis):
        p = sys.points[pi]
        before, anchor, after = hug(Point(p.x, p.y + r), r, line.slope, depth[(li, pi)])
        if n == 0:
            entry = before[0] if before else Point(anchor.x - r, line.at(anchor.x - r))
            if lead_height is not None:
                # horizontal run then a steep slant up into the first hug
                xs = entry.x - (entry.y - lead_height) / slant
                verts += [Point(box.xmin, lead_height), Point(xs, lead_height)]
            else:
                verts.append(Point(box.xmin, line.at(box.xmin)))
            if not before:
                verts.append(entry)
        verts += before
        anchors[len(verts)] = pi
        verts.append(anchor)
        verts += after
    last = sys.points[pis[-1]]
    end_x = box.xmax if tail == "box" else max(verts[-1].x, last.x) + r
    verts.append(Point(end_x, line.at(end_x)))
    cleaned = [verts[0]]
    for v in verts[1:]:
        if v != cleaned[-1]:
            cleaned.append(v)
    if len(cleaned) != len(verts):
        shift = {}
        j = 0
        for i, v in enumerate(verts):
            if i > 0 and v == verts[i - 1]:
                continue
            shift[i] = j
            j += 1
        anchors = {shift[i]: pi for i, pi in anchors.items()}
    return Route(cleaned, anchors)


def first_entry(sys, r, li, depth):
    """Where the route of line li first leaves its line, or None if it never does."""
    pis = [pi for l2, pi in sys.incidences if l2 == li]
    if not pis:
        return None
    pi = min(pis, key=lambda j: sys.points[j].x)
    p = sys.points[pi]
    line = sys.lines[li]
    before, anchor, _ = hug(Point(p.x, p.y + r), r, line.slope, depth[(li, pi)])
    return before[0] if before else Point(anchor.x - r, line.at(anchor.x - r))


def lead_slant(sys, box, r, depth):
    """Slope of the lead slants: steeper than every line, and steep enough
    that a slant from the bottom of the box reaches its entry from no
    further left than halfway to the left side."""
    cand = [Q(1, 2)] + [2 * abs(l.slope) for l in sys.lines]
    for li in range(len(sys.lines)):
        e = first_entry(sys, r, li, depth)
        if e is not None:
            cand.append(2 * (e.y - box.ymin) / (e.x - box.xmin))
    return max(cand)


def lead_heights(sys, box, r, order, depth, slant):
    """Distinct lead heights so that horizontal-then-slant leads nest."""
    entries = []
    for li in order:
        entry = first_entry(sys, r, li, depth)
        if entry is not None:
            entries.append((entry.y - slant * entry.x, li))
    entries.sort()
    for a, b in zip(entries, entries[1:]):
        if a[0] == b[0]:
            raise RoutingError("two leads share a slant line", (a[1], b[1]))
    lo = min((l.at(box.xmin) for l in sys.lines), default=box.ymin + 1)
    span = lo - box.ymin
    n = len(entries)
    return {li: box.ymin + span * Q(1, 4) + span * Q(1, 2) * Q(t, max(n, 1)) for t, (_, li) in enumerate(entries)}


# ---------------------------------------------------------------- offsets

def offset_vertex(vs, v, side, d):
    """Miter-joined offset of vertex v of a polyline (side +1 = left)."""
    last = len(vs) - 1
    if v == 0 or v == last:
        u = vs[1] - vs[0] if v == 0 else vs[last] - vs[last - 1]
        n = _left_normal(u)
        return Point(vs[v].x + side * d * n[0], vs[v].y + side * d * n[1])
    u1 = (vs[v].x - vs[v - 1].x, vs[v].y - vs[v - 1].y)
    u2 = (vs[v + 1].x - vs[v].x, vs[v + 1].y - vs[v].y)
    n1, n2 = _left_normal(u1), _left_normal(u2)
    c = cross(u1, u2)
    if c == 0:
        return Point(vs[v].x + side * d * n1[0], vs[v].y + side * d * n1[1])
    t = side * d * cross((n2[0] - n1[0], n2[1] - n1[1]), u2) / c
    return Point(vs[v].x + side * d * n1[0] + t * u1[0], vs[v].y + side * d * n1[1] + t * u1[1])


def cap_vertices(vs, side, d):
    """Square cap around the last vertex, from the `side` offset to the other."""
    e = vs[-1]
    u = (e.x - vs[-2].x, e.y - vs[-2].y)
    s = _l1(u)
    uh = (u[0] / s, u[1] / s)
    n = _left_normal(u)
    return [
        Point(e.x + side * d * n[0] + d * uh[0], e.y + side * d * n[1] + d * uh[1]),
        Point(e.x - side * d * n[0] + d * uh[0], e.y - side * d * n[1] + d * uh[1]),
    ]


def tube_stream(vs, start_seg, side, d):
    """Offset walk of vs from segment start_seg to the end, around the end,
    and back along the other side to the start. Yields (vertex, tag)."""
    for v in range(start_seg + 1, len(vs)):
        yield offset_vertex(vs, v, side, d)
    for p in cap_vertices(vs, side, d):
        yield p
    for v in range(len(vs) - 1, -1, -1):
        yield offset_vertex(vs, v, -side, d)


# ---------------------------------------------------------------- red routing

def _param(route, seg, p):
    a, b = route[seg], route[seg + 1]
    u = (b.x - a.x, b.y - a.y)
    return (seg, dot((p.x - a.x, p.y - a.y), u) / dot(u, u))


def _bbox_overlap(a, b, c, d):
    return not (
        max(a.x, b.x) < min(c.x, d.x) or max(c.x, d.x) < min(a.x, b.x)
        or max(a.y, b.y) < min(c.y, d.y) or max(c.y, d.y) < min(a.y, b.y)
    )


def _near_side(fv, fseg, y, direction):
    """+1 if a route moving along `direction` reaches y from the left of f."""
    a, b = fv[fseg], fv[fseg + 1]
    if y == b and fseg + 1 < len(fv) - 1:
        fseg += 1
        a, b = fv[fseg], fv[fseg + 1]
    if y == a and 0 < fseg:
        # vertex hit: the left sector runs counterclockwise from outgoing to reversed incoming
        u_out = (b.x - a.x, b.y - a.y)
        u_in_rev = (fv[fseg - 1].x - a.x, fv[fseg - 1].y - a.y)
        back = (-direction[0], -direction[1])
        return 1 if _rel_angle(u_out, back) < _rel_angle(u_out, u_in_rev) else -1
    c = cross((b.x - a.x, b.y - a.y), direction)
    if c == 0:
        raise RoutingError("route runs along an earlier curve", None)
    return 1 if c < 0 else -1


def _rel_angle(ref, v):
    """Sortable key for the counterclockwise angle from ref to v."""
    return _angle((dot(ref, v), cross(ref, v)))


_angle = cmp_to_key(angle_key_cmp)


class RedRouter:
    def __init__(self, box, r, params, blue_grid=None):
        self.box = box
        self.params = params
        finest = min([r] + list(params.per_curve_offset.values()))
        self.grid = HierarchicalGrid(box.xmin - 1, box.ymin - 1, pow2_at_most(finest) / 4)
        self.paths = {}  # curve key -> vertex list

    def add(self, key, verts):
        self.paths[key] = verts
        for s in range(len(verts) - 1):
            self.grid.insert(verts[s], verts[s + 1], (key, s))

    def hits(self, route):
        """Crossings of a route with routed curves, sorted along the route."""
        out = []
        for s in range(len(route) - 1):
            a, b = route[s], route[s + 1]
            found = {}
            for idx in self.grid.candidates(a, b):
                c, d = self.grid.segs[idx]
                res = segment_intersect((a, b), (c, d))
                if res.kind == "overlap":
                    raise RoutingError("route overlaps an earlier curve", self.grid.tags[idx])
                if res.kind == "point":
                    key, fs = self.grid.tags[idx]
                    prev = found.get((key, res.point))
                    if prev is None or fs < prev:
                        found[(key, res.point)] = fs
            for (key, p), fs in found.items():
                out.append((_param(route, s, p), p, key, fs))
        out.sort(key=lambda h: h[0])
        return out

    def route(self, key, rt: Route, d) -> list:
        route = rt.vertices
        anchor_params = sorted((i, Q(0)) for i in rt.anchors)
        hits = self.hits(route)
        path = [route[0]]
        cur = (0, Q(0))
        hi = 0
        while True:
            while hi < len(hits) and not hits[hi][0] > cur:
                hi += 1
            if hi == len(hits):
                break
            (yseg, yt), y, fkey, fseg = hits[hi]
            fv = self.paths[fkey]
            direction = (route[yseg + 1].x - route[yseg].x, route[yseg + 1].y - route[yseg].y)
            side = _near_side(fv, fseg, y, direction)
            entry = self._entry(route, cur, (yseg, yt), y, fv, fseg, side, d)
            (aseg, _), a_pt, k0 = entry
            for v in range(cur[0] + 1, aseg + 1):
                path.append(route[v])
            path.append(a_pt)
            z = self._follow(route, (yseg, yt), fv, k0, side, d, path)
            if z is None:
                raise RoutingError(f"tube around curve {fkey} never rejoins the route of {key}", (key, fkey))
            zpar, zpt = z
            for ai, _ in anchor_params:
                if (yseg, yt) < (ai, Q(0)) < zpar:
                    raise RoutingError(f"tube around curve {fkey} skips an anchor of {key}", (key, fkey))
            path.append(zpt)
            cur = zpar
        for v in range(cur[0] + 1, len(route)):
            path.append(route[v])
        return _clean(path, key)

    def _entry(self, route, cur, ypar, y, fv, fseg, side, d):
        """Last crossing, before y, of the route with the near offset of f."""
        best = None
        lo, hi = max(0, fseg - 2), min(len(fv) - 2, fseg + 2)
        offs = {v: offset_vertex(fv, v, side, d) for v in range(lo, hi + 2)}
        for s in range(cur[0], ypar[0] + 1):
            a = route[s] if s > cur[0] else _point_at(route, cur)
            b = route[s + 1] if s < ypar[0] else y
            if a == b:
                continue
            for k in range(lo, hi + 1):
                res = segment_intersect((a, b), (offs[k], offs[k + 1]))
                if res.kind != "point":
                    continue
                par = _param(route, s, res.point)
                if par <= cur or not par < ypar:
                    continue
                if best is None or par > best[0]:
                    best = (par, res.point, k)
        if best is None:
            raise RoutingError("no room to enter the tube", None)
        return best

    def _follow(self, route, ypar, fv, k0, side, d, path):
        """Walk the tube from the entry, stopping at its first crossing with
        the route beyond y. Appends the walked vertices to path."""
        prev = path[-1]
        n = len(route)
        for q in tube_stream(fv, k0, side, d):
            if q == prev:
                continue
            best = None
            for s in range(ypar[0], n - 1):
                a, b = route[s], route[s + 1]
                if not _bbox_overlap(prev, q, a, b):
                    continue
                res = segment_intersect((prev, q), (a, b))
                if res.kind == "overlap":
                    raise RoutingError("tube runs along the route", None)
                if res.kind != "point":
                    continue
                par = _param(route, s, res.point)
                if not par > ypar:
                    continue
                t = dist2(prev, res.point)
                if best is None or t < best[0]:
                    best = (t, par, res.point)
            if best is not None:
                return best[1], best[2]
            path.append(q)
            prev = q
        return None


def _point_at(route, par):
    seg, t = par
    a, b = route[seg], route[seg + 1]
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def _clean(path, key):
    out = [path[0]]
    for v in path[1:]:
        if v == out[-1]:
            continue
        if len(out) >= 2 and is_backtrack(out[-2], out[-1], v):
            raise RoutingError(f"curve {key} doubles back on itself", (key,))
        out.append(v)
    return out


def red_order(sys: PointLineSystem, box: Box) -> list:
    order = line_order_at(sys.lines, box.xmin)
    heights = [sys.lines[i].at(box.xmin) for i in order]
    if len(set(heights)) != len(heights):
        raise RoutingError("two lines meet on the left side of the box")
    return order


def default_params(sys, box, r, order, offset_ratio=4) -> RoutingParams:
    depth = assign_depths(sys, r, order)
    gaps = [r * abs(l.slope) / 16 for l in sys.lines if l.slope != 0]
    by_point = {}
    for (li, pi), e in depth.items():
        by_point.setdefault(pi, []).append(e)
    for es in by_point.values():
        es.sort()
        gaps.append(es[0])
        gaps.extend(b - a for a, b in zip(es, es[1:]))
    gap = min(gaps) if gaps else r
    base = gap / 16
    per = {li: base / Q(offset_ratio) ** t for t, li in enumerate(order)}
    return RoutingParams(base, per, gap, depth)


def synth_red_curves(sys, box, disks, params: RoutingParams | None = None, first_id: int = 0):
    r = disks[0].radius if disks else Q(1, 2)
    order = red_order(sys, box)
    if params is None:
        params = default_params(sys, box, r, order)
    slant = lead_slant(sys, box, r, params.depth)
    heights = lead_heights(sys, box, r, order, params.depth, slant) if params.leads else {}
    router = RedRouter(box, r, params)
    curves = {}
    point_id = {d.point_index: d for d in disks}
    for li in order:
        rt = intended_route(sys, box, r, li, params.depth, heights.get(li), slant, params.tail)
        verts = router.route(li, rt, params.per_curve_offset[li])
        router.add(li, verts)
        decl = []
        for pi in rt.anchors.values():
            anchor = dict(point_id[pi].anchors)[li]
            decl.append((pi, anchor))
        curves[li] = (verts, decl)
    out = []
    for li in range(len(sys.lines)):
        verts, decl = curves[li]
        out.append(Curve(RED, Polyline(tuple(verts)), li, decl, first_id + li))
    return out


# ---------------------------------------------------------------- assembly

def shrink(params: RoutingParams, factor=4) -> RoutingParams:
    """Same routing with every tube offset divided by factor."""
    return RoutingParams(
        params.base_offset / factor,
        {k: v / factor for k, v in params.per_curve_offset.items()},
        params.min_feature_gap, dict(params.depth), params.leads, params.tail,
    )


def synthesize(sys: PointLineSystem, grounded: bool = False, params: RoutingParams | None = None,
               retries: int = 2) -> CurveFamily:
    """Full construction; a routing failure is retried with thinner tubes."""
    gp = verify_general_position(sys)
    if not gp.ok:
        raise ValueError("system is not in general position: " + "; ".join(gp.violations[:3]))
    box = compute_box(sys)
    r = choose_disk_radius(sys, box)
    nl = len(sys.lines)
    blues, disks = synth_blue_curves(sys, box, r, first_id=nl)
    if params is None:
        params = default_params(sys, box, r, red_order(sys, box))
    for attempt in range(retries + 1):
        try:
            reds = synth_red_curves(sys, box, disks, params, first_id=0)
            break
        except RoutingError:
            if attempt == retries:
                raise
            params = shrink(params)
    for c in reds:
        c.declared_tangencies = [(nl + pi, p) for pi, p in c.declared_tangencies]
    by_blue = {c.id: c for c in blues}
    for c in reds:
        for bid, p in c.declared_tangencies:
            by_blue[bid].declared_tangencies.append((c.id, p))
    fam = CurveFamily(reds + blues, box)
    return to_doubly_grounded(fam) if grounded else fam


def to_doubly_grounded(family: CurveFamily, margin=1) -> CurveFamily:
    box = family.box
    xmax_red = max([box.xmax] + [v.x for c in family.reds() for v in c.vertices])
    right = xmax_red + Q(margin)
    left = box.xmin
    blues = sorted(family.blues(), key=lambda c: -c.vertices[-1].x)
    height = {c.id: box.ymax + t + 1 for t, c in enumerate(blues)}
    curves = []
    for c in family.curves:
        if c.color == RED:
            curves.append(Curve(RED, c.polyline, c.source, list(c.declared_tangencies), c.id))
            continue
        vs = list(c.vertices)
        top = vs[-1]
        h = height[c.id]
        vs[-1] = Point(top.x, h)
        vs.append(Point(right, h))
        curves.append(Curve(BLUE, Polyline(tuple(vs)), c.source, list(c.declared_tangencies), c.id))
    return CurveFamily(curves, box, (left, right), True)
