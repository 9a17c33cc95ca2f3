"""Planar primitives, crossing kernels, and arrangement queries."""

from .primitives import (
    INTERSECT_TOL,
    DEDUP_TOL,
    GRAZING_ANGLE,
    IntersectionRecord,
    Point2,
    Polyline,
    polyline_intersections,
    segment_intersect,
    self_intersections,
    winding_number,
)
from .arrangement import enclosure_check, enclosing_cycle
from .kernels import USING_COMPILED

__all__ = [
    "INTERSECT_TOL",
    "DEDUP_TOL",
    "GRAZING_ANGLE",
    "IntersectionRecord",
    "Point2",
    "Polyline",
    "polyline_intersections",
    "segment_intersect",
    "self_intersections",
    "winding_number",
    "enclosure_check",
    "enclosing_cycle",
    "USING_COMPILED",
]
