"""Colored polyline families and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact_geom import Point, Polyline, Q, fmt
from .incidence import SchemaError

RED = "red"
BLUE = "blue"


@dataclass(frozen=True)
class Box:
    xmin: object
    xmax: object
    ymin: object
    ymax: object

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("degenerate box")

    def contains_strictly(self, p) -> bool:
        return self.xmin < p[0] < self.xmax and self.ymin < p[1] < self.ymax

    def to_json(self) -> dict:
        return {k: fmt(getattr(self, k)) for k in ("xmin", "xmax", "ymin", "ymax")}

    @staticmethod
    def from_json(d: dict) -> "Box":
        return Box(Q(d["xmin"]), Q(d["xmax"]), Q(d["ymin"]), Q(d["ymax"]))


@dataclass
class Curve:
    color: str
    polyline: Polyline
    source: int
    declared_tangencies: list = field(default_factory=list)  # (other_id, Point)
    id: int = -1

    @property
    def vertices(self):
        return self.polyline.vertices


@dataclass
class CurveFamily:
    curves: list
    box: Box
    strip: tuple | None = None
    grounded: bool = False

    def __post_init__(self):
        for i, c in enumerate(self.curves):
            if c.id < 0:
                c.id = i

    def by_id(self) -> dict:
        return {c.id: c for c in self.curves}

    def reds(self):
        return [c for c in self.curves if c.color == RED]

    def blues(self):
        return [c for c in self.curves if c.color == BLUE]

    def to_json(self) -> dict:
        return {
            "grounded": self.grounded,
            "strip": None if self.strip is None else [fmt(self.strip[0]), fmt(self.strip[1])],
            "box": self.box.to_json(),
            "curves": [
                {
                    "id": c.id,
                    "color": c.color,
                    "source": c.source,
                    "vertices": [v.to_json() for v in c.vertices],
                    "declared_tangencies": [[o, p.to_json()] for o, p in c.declared_tangencies],
                }
                for c in self.curves
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "CurveFamily":
        if not isinstance(data, dict):
            raise SchemaError("curve_family: expected an object")
        for key, kind in (("curves", list), ("box", dict)):
            if key not in data:
                raise SchemaError(f"curve_family.{key}: missing")
            if not isinstance(data[key], kind):
                raise SchemaError(f"curve_family.{key}: expected {'a list' if kind is list else 'an object'}")
        try:
            curves = []
            for i, cd in enumerate(data["curves"]):
                if not isinstance(cd, dict):
                    raise SchemaError(f"curves[{i}]: expected an object")
                missing = [k for k in ("id", "color", "source", "vertices") if k not in cd]
                if missing:
                    raise SchemaError(f"curves[{i}].{missing[0]}: missing")
                color = cd["color"]
                if color not in (RED, BLUE):
                    raise SchemaError(f"curves[{i}].color: unknown color {color!r}")
                try:
                    poly = Polyline(tuple(Point.from_json(v) for v in cd["vertices"]))
                except ValueError as exc:
                    raise SchemaError(f"curves[{i}].vertices: {exc}") from exc
                decl = [(int(o), Point.from_json(p)) for o, p in cd.get("declared_tangencies", [])]
                curves.append(Curve(color, poly, int(cd["source"]), decl, int(cd["id"])))
            strip = data.get("strip")
            if strip is not None:
                strip = (Q(strip[0]), Q(strip[1]))
            fam = CurveFamily(curves, Box.from_json(data["box"]), strip, bool(data.get("grounded", False)))
        except SchemaError:
            raise
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SchemaError(f"curve_family: {exc!r}") from exc
        ids = [c.id for c in fam.curves]
        if len(set(ids)) != len(ids):
            raise SchemaError("curve_family.curves: duplicate ids")
        return fam
