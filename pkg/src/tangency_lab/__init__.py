"""Exact construction and certification of tangencies between two families of curves."""

from .curves import BLUE, RED, Box, Curve, CurveFamily
from .exact_geom import Line, Point, Polyline, Q, fmt
from .incidence import PointLineSystem, SchemaError, ShearError, generate_grid_system, shear_normalize
from .synthesis import RoutingError, synthesize, to_doubly_grounded
from .verifier import TangencyReport, tangency_report

__version__ = "0.1.0"
