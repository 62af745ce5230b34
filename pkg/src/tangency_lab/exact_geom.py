"""Exact rational geometry: numbers, points, segments, polylines and predicates.

Every coordinate in the package is a :data:`Rational` (a GMP ``mpq``), so all
predicates are decided without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import gmpy2

Rational = type(gmpy2.mpq(0))
RationalLike = Union[int, str, "Rational"]


def Q(value, den=None) -> Rational:
    """Build a rational from an int, a ``"num/den"`` string, a Fraction or an mpq."""
    if den is not None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return gmpy2.mpq(value, den)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coordinates")
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not a rational literal: {value!r}")
        return gmpy2.mpq(text)
    return gmpy2.mpq(value)


def fmt(q: Rational) -> str:
    """Canonical ``"num/den"`` rendering (lowest terms, positive denominator)."""
    q = gmpy2.mpq(q)
    return f"{q.numerator}/{q.denominator}"


class Point(NamedTuple):
    x: Rational
    y: Rational

    @staticmethod
    def of(x, y) -> "Point":
        return Point(Q(x), Q(y))

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def scale(self, f) -> "Point":
        return Point(self.x * f, self.y * f)

    def to_json(self) -> list:
        return [fmt(self.x), fmt(self.y)]

    @staticmethod
    def from_json(data: Sequence) -> "Point":
        return Point(Q(data[0]), Q(data[1]))


@dataclass(frozen=True)
class Line:
    """Non-vertical line ``y = slope * x + intercept``."""

    slope: Rational
    intercept: Rational

    def at(self, x) -> Rational:
        return self.slope * x + self.intercept

    def side(self, p: Point) -> int:
        """+1 above, 0 on, -1 below."""
        d = p.y - self.at(p.x)
        return (d > 0) - (d < 0)

    def contains(self, p: Point) -> bool:
        return p.y == self.at(p.x)

    def to_json(self) -> dict:
        return {"slope": fmt(self.slope), "intercept": fmt(self.intercept)}

    @staticmethod
    def from_json(data: dict) -> "Line":
        return Line(Q(data["slope"]), Q(data["intercept"]))


def line_crossing(l1: Line, l2: Line) -> Point | None:
    """Common point of two lines, or None when parallel."""
    if l1.slope == l2.slope:
        return None
    x = (l2.intercept - l1.intercept) / (l1.slope - l2.slope)
    return Point(x, l1.at(x))


class Segment(NamedTuple):
    a: Point
    b: Point


@dataclass(frozen=True)
class Polyline:
    vertices: tuple

    def __post_init__(self):
        vs = tuple(self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(vs) < 2:
            raise ValueError("a polyline needs at least two vertices")
        for i in range(len(vs) - 1):
            if vs[i] == vs[i + 1]:
                raise ValueError(f"repeated consecutive vertex at index {i}")
        for i in range(1, len(vs) - 1):
            if is_backtrack(vs[i - 1], vs[i], vs[i + 1]):
                raise ValueError(f"polyline doubles back at vertex {i}")

    def segments(self):
        vs = self.vertices
        return [Segment(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]

    def __len__(self):
        return len(self.vertices)


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of (b - a) x (c - a)."""
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def dot(u, v) -> Rational:
    return u[0] * v[0] + u[1] * v[1]


def cross(u, v) -> Rational:
    return u[0] * v[1] - u[1] * v[0]


def is_backtrack(a: Point, b: Point, c: Point) -> bool:
    """True when the path a-b-c reverses direction along a line at b."""
    u = (a[0] - b[0], a[1] - b[1])
    v = (c[0] - b[0], c[1] - b[1])
    return cross(u, v) == 0 and dot(u, v) > 0


def dist2(p, q) -> Rational:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def on_segment(p: Point, s: Segment) -> bool:
    """Closed-segment membership."""
    a, b = s
    if orient(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


@dataclass(frozen=True)
class IntersectionResult:
    kind: str  # "empty" | "point" | "overlap"
    point: Point | None = None
    segment: Segment | None = None

    def __eq__(self, other):
        if not isinstance(other, IntersectionResult) or self.kind != other.kind:
            return False
        if self.kind == "overlap":
            return {self.segment.a, self.segment.b} == {other.segment.a, other.segment.b}
        return self.point == other.point

    def __hash__(self):
        if self.kind == "overlap":
            return hash((self.kind, frozenset(self.segment)))
        return hash((self.kind, self.point))


EMPTY = IntersectionResult("empty")


def segment_intersect(s: Segment, t: Segment) -> IntersectionResult:
    """Exact intersection of two closed segments.

    Collinear overlaps of positive length come back as an ``overlap`` whose
    endpoints are listed in lexicographic order, so the result does not depend
    on argument order.
    """
    p, p2 = s
    q, q2 = t
    if max(p[0], p2[0]) < min(q[0], q2[0]) or max(q[0], q2[0]) < min(p[0], p2[0]):
        return EMPTY
    if max(p[1], p2[1]) < min(q[1], q2[1]) or max(q[1], q2[1]) < min(p[1], p2[1]):
        return EMPTY
    r = (p2[0] - p[0], p2[1] - p[1])
    d = (q2[0] - q[0], q2[1] - q[1])
    denom = cross(r, d)
    qp = (q[0] - p[0], q[1] - p[1])
    if denom == 0:
        if cross(qp, r) != 0:
            return EMPTY
        lo1, hi1 = sorted((p, p2))
        lo2, hi2 = sorted((q, q2))
        lo = max(lo1, lo2)
        hi = min(hi1, hi2)
        if lo > hi:
            return EMPTY
        if lo == hi:
            return IntersectionResult("point", Point(*lo))
        return IntersectionResult("overlap", segment=Segment(Point(*lo), Point(*hi)))
    tn = cross(qp, d)
    un = cross(qp, r)
    if denom > 0:
        if tn < 0 or tn > denom or un < 0 or un > denom:
            return EMPTY
    else:
        if tn > 0 or tn < denom or un > 0 or un < denom:
            return EMPTY
    # snap to exact endpoints when touching there
    if tn == 0:
        return IntersectionResult("point", Point(*p))
    if tn == denom:
        return IntersectionResult("point", Point(*p2))
    if un == 0:
        return IntersectionResult("point", Point(*q))
    if un == denom:
        return IntersectionResult("point", Point(*q2))
    f = tn / denom
    return IntersectionResult("point", Point(p[0] + r[0] * f, p[1] + r[1] * f))


def line_second_circle_intersection(center: Point, r, base: Point, slope) -> Point:
    """Second meeting point of the line through ``base`` with the given slope
    and the circle whose bottommost point is ``base``."""
    r = Q(r)
    if slope is None:
        raise ValueError("vertical lines are not supported")
    s = Q(slope)
    if s == 0:
        raise ValueError("slope 0 is tangent at the base point; no second intersection")
    if r <= 0:
        raise ValueError("radius must be positive")
    if base != Point(center[0], center[1] - r):
        raise ValueError("base must be the bottommost point of the circle")
    a, c = center
    den = 1 + s * s
    return Point(a + 2 * r * s / den, c - r + 2 * r * s * s / den)


def on_circle(p: Point, center: Point, r) -> bool:
    return dist2(p, center) == Q(r) * Q(r)


# Exact angular order of direction vectors.

def half(v) -> int:
    """0 for angles in [0, pi), 1 for [pi, 2pi)."""
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_key_cmp(u, v) -> int:
    """Compare directions by polar angle in [0, 2pi)."""
    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def same_direction(u, v) -> bool:
    return cross(u, v) == 0 and dot(u, v) > 0


def isqrt_floor_rational(q: Rational, den: int = 1 << 20) -> Rational:
    """Rational lower bound on sqrt(q) with the given denominator."""
    if q < 0:
        raise ValueError("negative")
    n = gmpy2.isqrt(gmpy2.mpz(gmpy2.floor(q * den * den)))
    return gmpy2.mpq(n, den)
