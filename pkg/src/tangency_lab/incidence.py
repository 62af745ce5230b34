"""Point-line incidence systems built on the integer grid, and their shear repair."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .exact_geom import Line, Point, Q, line_crossing


@dataclass
class PointLineSystem:
    points: list
    lines: list
    incidences: list
    k: int = 0

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "points": [p.to_json() for p in self.points],
            "lines": [l.to_json() for l in self.lines],
            "incidences": [[li, pi] for li, pi in self.incidences],
        }

    @staticmethod
    def from_json(data: dict) -> "PointLineSystem":
        try:
            pts = [Point.from_json(p) for p in data["points"]]
            lines = [Line.from_json(l) for l in data["lines"]]
            inc = [(int(a), int(b)) for a, b in data["incidences"]]
            k = int(data.get("k", 0))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"point_line_system: {exc}") from exc
        for li, pi in inc:
            if not (0 <= li < len(lines) and 0 <= pi < len(pts)):
                raise SchemaError(f"point_line_system: incidence {[li, pi]} out of range")
        return PointLineSystem(pts, lines, inc, k)


class SchemaError(ValueError):
    pass


class ShearError(ValueError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"shear parameter too small: points {pair[0]} and {pair[1]} share an x-coordinate")


def generate_grid_system(k: int) -> PointLineSystem:
    """Grid {1..k} x {1..2k^2} with lines y = mx + b, m in 1..k, b in 1..k^2."""
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be a positive integer")
    points = [Point(Q(x), Q(y)) for x in range(1, k + 1) for y in range(1, 2 * k * k + 1)]
    index = {p: j for j, p in enumerate(points)}
    lines, inc = [], []
    for m in range(1, k + 1):
        for b in range(1, k * k + 1):
            li = len(lines)
            lines.append(Line(Q(m), Q(b)))
            for x in range(1, k + 1):
                inc.append((li, index[Point(Q(x), Q(m * x + b))]))
    return PointLineSystem(points, lines, inc, k)


def default_shear(sys: PointLineSystem) -> int:
    ymax = max((p.y for p in sys.points), default=Q(0))
    return int(ymax) + 1 if ymax >= 0 else 1


def shear_normalize(sys: PointLineSystem, M: int | None = None) -> PointLineSystem:
    """Apply (x, y) -> (Mx + y, y) to points and lines."""
    if M is None:
        M = default_shear(sys)
    M = Q(M)
    if M <= 0:
        raise ValueError("shear parameter must be positive")
    pts = [Point(M * p.x + p.y, p.y) for p in sys.points]
    seen = {}
    for j, p in enumerate(pts):
        if p.x in seen:
            raise ShearError((seen[p.x], j))
        seen[p.x] = j
    lines = []
    for l in sys.lines:
        # y = m x + b, X = M x + y  =>  y = (m X + M b) / (M + m)
        den = M + l.slope
        if den == 0:
            raise ValueError("shear maps a line to a vertical line")
        lines.append(Line(l.slope / den, M * l.intercept / den))
    out = PointLineSystem(pts, lines, list(sys.incidences), sys.k)
    for li, pi in out.incidences:
        assert out.lines[li].contains(out.points[pi])
    return out


def count_incidences_bruteforce(sys: PointLineSystem) -> int:
    return sum(1 for l in sys.lines for p in sys.points if l.contains(p))


@dataclass
class GeneralPositionReport:
    violations: list = field(default_factory=list)
    line_order: list = field(default_factory=list)
    reference_x: object = None

    @property
    def ok(self) -> bool:
        return not self.violations


def crossings(lines) -> list:
    """All pairwise crossings as (i, h, point)."""
    out = []
    for i, h in combinations(range(len(lines)), 2):
        c = line_crossing(lines[i], lines[h])
        if c is not None:
            out.append((i, h, c))
    return out


def reference_left_x(sys: PointLineSystem):
    """x strictly left of every point and every line crossing, at distance 1."""
    xs = [p.x for p in sys.points] + [c.x for _, _, c in crossings(sys.lines)]
    return (min(xs) if xs else Q(0)) - 1


def line_order_at(lines, x) -> list:
    """Line indices sorted by their height at x, topmost first."""
    return sorted(range(len(lines)), key=lambda i: -lines[i].at(x))


def verify_general_position(sys: PointLineSystem, reference_x=None) -> GeneralPositionReport:
    rep = GeneralPositionReport()
    for i, l in enumerate(sys.lines):
        if l.slope == 0:
            rep.violations.append(f"horizontal line at index {i}")
    seen = {}
    for j, p in enumerate(sys.points):
        if p.x in seen:
            other = seen[p.x]
            what = "coincide" if sys.points[other] == p else f"share x-coordinate {p.x}"
            rep.violations.append(f"points {other} and {j} {what}")
        else:
            seen[p.x] = j
    for i, h in combinations(range(len(sys.lines)), 2):
        if sys.lines[i] == sys.lines[h]:
            rep.violations.append(f"lines {i} and {h} coincide")
    for li, pi in sys.incidences:
        if not sys.lines[li].contains(sys.points[pi]):
            rep.violations.append(f"listed incidence ({li}, {pi}) does not hold")
    if reference_x is None:
        reference_x = reference_left_x(sys)
    rep.reference_x = reference_x
    rep.line_order = line_order_at(sys.lines, reference_x)
    heights = {}
    for i, l in enumerate(sys.lines):
        y = l.at(reference_x)
        if y in heights:
            rep.violations.append(f"lines {heights[y]} and {i} meet on the reference line x = {reference_x}")
        heights[y] = i
    return rep
