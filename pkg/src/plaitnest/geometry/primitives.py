"""Tolerance-based planar primitives.

Everything downstream (lift classification, substitution stages, figure
checks) reduces to three queries implemented here: segment/polyline
crossings, winding numbers, and point-to-curve distance. Inputs are
synthetic and well-conditioned, so all predicates are tolerance-based;
there is no exact-arithmetic fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Union

import numpy as np

from ..errors import CollinearOverlap, PointOnBoundary
from . import kernels

# Absolute distance below which two points count as touching.
INTERSECT_TOL = 1e-9
# Consecutive polyline vertices closer than this are considered duplicated.
DEDUP_TOL = 1e-12
# Crossing angle (radians) below which a crossing is flagged as grazing.
GRAZING_ANGLE = 1e-6


@dataclass(frozen=True)
class Point2:
    """A finite point of the plane; also stands in for the complex x + iy."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


PointLike = Union[Point2, Sequence[float], np.ndarray]


def _as_xy(p: PointLike) -> tuple[float, float]:
    px, py = p
    return float(px), float(py)


class Polyline:
    """Ordered vertex chain with strictly increasing arc length.

    The vertex array is frozen after construction; parameters in crossing
    records are arc-length positions along the chain.
    """

    __slots__ = ("vertices", "_cum")

    def __init__(self, vertices) -> None:
        arr = np.ascontiguousarray(vertices, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("vertices must be an (n, 2) array")
        if arr.shape[0] < 2:
            raise ValueError("a polyline needs at least 2 vertices")
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite vertex")
        steps = np.hypot(*(arr[1:] - arr[:-1]).T)
        if np.any(steps <= DEDUP_TOL):
            k = int(np.argmax(steps <= DEDUP_TOL))
            raise ValueError(f"duplicate consecutive vertices at index {k}")
        arr.setflags(write=False)
        self.vertices = arr
        self._cum = None

    @property
    def cum_lengths(self) -> np.ndarray:
        if self._cum is None:
            steps = np.hypot(*(self.vertices[1:] - self.vertices[:-1]).T)
            cum = np.concatenate(([0.0], np.cumsum(steps)))
            cum.setflags(write=False)
            self._cum = cum
        return self._cum

    @property
    def length(self) -> float:
        return float(self.cum_lengths[-1])

    @property
    def segment_count(self) -> int:
        return self.vertices.shape[0] - 1

    def param_of(self, seg: int, frac: float) -> float:
        """Arc-length position of the point at fraction `frac` of segment `seg`."""
        cum = self.cum_lengths
        return float(cum[seg] + frac * (cum[seg + 1] - cum[seg]))

    def point_at(self, t: float) -> Point2:
        cum = self.cum_lengths
        x = np.interp(t, cum, self.vertices[:, 0])
        y = np.interp(t, cum, self.vertices[:, 1])
        return Point2(float(x), float(y))

    def distance_to(self, p: PointLike) -> float:
        px, py = _as_xy(p)
        a = self.vertices[:-1]
        d = self.vertices[1:] - a
        ll = np.einsum("ij,ij->i", d, d)
        t = ((px - a[:, 0]) * d[:, 0] + (py - a[:, 1]) * d[:, 1]) / ll
        t = np.clip(t, 0.0, 1.0)
        fx = a[:, 0] + t * d[:, 0] - px
        fy = a[:, 1] + t * d[:, 1] - py
        return float(np.sqrt(np.min(fx * fx + fy * fy)))

    def nearest_param(self, p: PointLike) -> float:
        """Arclength parameter of the point on the polyline closest to p."""
        px, py = _as_xy(p)
        a = self.vertices[:-1]
        d = self.vertices[1:] - a
        ll = np.einsum("ij,ij->i", d, d)
        t = ((px - a[:, 0]) * d[:, 0] + (py - a[:, 1]) * d[:, 1]) / ll
        t = np.clip(t, 0.0, 1.0)
        fx = a[:, 0] + t * d[:, 0] - px
        fy = a[:, 1] + t * d[:, 1] - py
        seg = int(np.argmin(fx * fx + fy * fy))
        return self.param_of(seg, float(t[seg]))

    def reversed(self) -> "Polyline":
        return Polyline(self.vertices[::-1])

    def map_vertices(self, fn: Callable[[np.ndarray], np.ndarray]) -> "Polyline":
        return Polyline(fn(self.vertices))

    def is_closed(self, tol: float = DEDUP_TOL) -> bool:
        return bool(np.hypot(*(self.vertices[0] - self.vertices[-1])) <= tol)

    def __repr__(self) -> str:
        v = self.vertices
        return f"Polyline({v.shape[0]} vertices, length {self.length:.6g})"


@dataclass
class IntersectionRecord:
    """One contact between two curves.

    `touch` marks endpoint contacts (T-junctions and tolerance touches),
    `grazing` marks near-tangential crossing angles; `offset` is filled in
    by the lift classifier.
    """

    point: Point2
    t_first: float
    t_second: float
    offset: Optional[int] = None
    grazing: bool = False
    touch: bool = False
    delta: Optional[int] = field(default=None, repr=False)


def segment_intersect(p0: PointLike, p1: PointLike, q0: PointLike, q1: PointLike,
                      tol: float = INTERSECT_TOL):
    """Crossing of two segments, or None.

    Returns (point, s, t) with barycentric parameters on each segment.
    Endpoint contacts within `tol` count as crossings; collinear overlap
    longer than `tol` raises instead of answering.
    """
    p0x, p0y = _as_xy(p0)
    p1x, p1y = _as_xy(p1)
    q0x, q0y = _as_xy(q0)
    q1x, q1y = _as_xy(q1)
    d1x, d1y = p1x - p0x, p1y - p0y
    d2x, d2y = q1x - q0x, q1y - q0y
    l1 = math.hypot(d1x, d1y)
    l2 = math.hypot(d2x, d2y)
    if l1 <= tol or l2 <= tol:
        raise ValueError("degenerate segment")
    rx, ry = q0x - p0x, q0y - p0y
    denom = d1x * d2y - d1y * d2x
    if abs(denom) <= 1e-14 * l1 * l2:
        # Parallel. Either disjoint, or collinear with a touch or an overlap.
        if abs(rx * d1y - ry * d1x) > tol * l1:
            return None
        t0 = (rx * d1x + ry * d1y) / (l1 * l1)
        t1 = ((q1x - p0x) * d1x + (q1y - p0y) * d1y) / (l1 * l1)
        lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
        ov0, ov1 = max(0.0, lo), min(1.0, hi)
        ext = (ov1 - ov0) * l1
        if ext > tol:
            raise CollinearOverlap(f"segments overlap over length {ext:.3g}")
        if ext < -tol:
            return None
        s = min(1.0, max(0.0, 0.5 * (ov0 + ov1)))
        px, py = p0x + s * d1x, p0y + s * d1y
        t = ((px - q0x) * d2x + (py - q0y) * d2y) / (l2 * l2)
        return Point2(px, py), s, min(1.0, max(0.0, t))
    s = (rx * d2y - ry * d2x) / denom
    t = (rx * d1y - ry * d1x) / denom
    slack_s = tol / l1
    slack_t = tol / l2
    if -slack_s <= s <= 1.0 + slack_s and -slack_t <= t <= 1.0 + slack_t:
        s = min(1.0, max(0.0, s))
        t = min(1.0, max(0.0, t))
        return Point2(p0x + s * d1x, p0y + s * d1y), s, t
    return None


def _records_from_hits(hits: np.ndarray, p: Polyline, q: Polyline,
                       tol: float) -> list[IntersectionRecord]:
    """Convert raw kernel hits into deduplicated, sorted records."""
    if hits.shape[0] == 0:
        return []
    overlap = hits[:, 6] == 2.0
    if np.any(overlap):
        i = int(hits[np.argmax(overlap), 0])
        raise CollinearOverlap(f"collinear overlap at segment {i}")

    p_dirs = p.vertices[1:] - p.vertices[:-1]
    q_dirs = q.vertices[1:] - q.vertices[:-1]

    recs = []
    for i, j, s, t, x, y, _kind in hits:
        i, j = int(i), int(j)
        d1 = p_dirs[i]
        d2 = q_dirs[j]
        l1 = math.hypot(d1[0], d1[1])
        l2 = math.hypot(d2[0], d2[1])
        sin_angle = abs(d1[0] * d2[1] - d1[1] * d2[0]) / (l1 * l2)
        touch = (s * l1 <= tol or (1.0 - s) * l1 <= tol
                 or t * l2 <= tol or (1.0 - t) * l2 <= tol)
        recs.append(IntersectionRecord(
            point=Point2(float(x), float(y)),
            t_first=p.param_of(i, float(s)),
            t_second=q.param_of(j, float(t)),
            grazing=bool(sin_angle < GRAZING_ANGLE),
            touch=bool(touch),
        ))
    recs.sort(key=lambda r: (r.t_first, r.t_second))

    # Contacts at a shared polyline vertex are reported by both incident
    # segments; keep one, preferring a non-touch representative.
    merged: list[IntersectionRecord] = []
    for r in recs:
        if merged:
            prev = merged[-1]
            close = (abs(r.point.x - prev.point.x) <= tol
                     and abs(r.point.y - prev.point.y) <= tol
                     and abs(r.t_first - prev.t_first) <= 4 * tol + 1e-12
                     and abs(r.t_second - prev.t_second) <= 4 * tol + 1e-12)
            if close:
                if prev.touch and not r.touch:
                    merged[-1] = r
                continue
        merged.append(r)
    return merged


def polyline_intersections(p: Polyline, q: Polyline,
                           tol: float = INTERSECT_TOL) -> list[IntersectionRecord]:
    """All contacts between two polylines, sorted along the first."""
    hits = kernels.polyline_crossings(p.vertices, q.vertices, tol)
    return _records_from_hits(hits, p, q, tol)


def self_intersections(p: Polyline, tol: float = INTERSECT_TOL) -> list[IntersectionRecord]:
    """Contacts of a polyline with itself, ignoring adjacent segments."""
    hits = kernels.self_crossings(p.vertices, tol)
    return _records_from_hits(hits, p, p, tol)


def winding_number(loop: Polyline, p: PointLike, tol: float = INTERSECT_TOL) -> int:
    """Winding number of a closed polyline about `p`."""
    v = loop.vertices
    if not loop.is_closed():
        raise ValueError("loop is not closed")
    px, py = _as_xy(p)
    if loop.distance_to((px, py)) <= tol:
        raise PointOnBoundary(f"query point ({px}, {py}) lies on the loop")
    return _winding_of_cycle(v, px, py)


def _winding_of_cycle(v: np.ndarray, px: float, py: float) -> int:
    """Signed crossing count of the (closed) vertex cycle about (px, py)."""
    x0, y0 = v[:-1, 0], v[:-1, 1]
    x1, y1 = v[1:, 0], v[1:, 1]
    cross = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
    up = (y0 <= py) & (y1 > py) & (cross > 0)
    down = (y1 <= py) & (y0 > py) & (cross < 0)
    return int(np.count_nonzero(up)) - int(np.count_nonzero(down))


def clip_away_ball(vertices: np.ndarray, cx: float, cy: float,
                   rho: float) -> list[Polyline]:
    """Pieces of a polyline outside the open ball |z - c| < rho.

    Segments crossing the circle are cut at the exact chord points, so a
    long segment through the ball loses only its inner chord.
    """
    pieces: list[np.ndarray] = []
    cur: list[np.ndarray] = []

    def flush():
        nonlocal cur
        if len(cur) >= 2:
            pts = [cur[0]]
            for p in cur[1:]:
                if math.hypot(*(p - pts[-1])) > 1e-12:
                    pts.append(p)
            if len(pts) >= 2:
                pieces.append(np.array(pts))
        cur = []

    c = np.array([cx, cy])
    for i in range(vertices.shape[0] - 1):
        p, q = vertices[i], vertices[i + 1]
        d = q - p
        aa = float(d @ d)
        if aa <= 1e-30:
            continue
        bb = 2.0 * float(d @ (p - c))
        cc = float((p - c) @ (p - c)) - rho * rho
        disc = bb * bb - 4.0 * aa * cc
        t1, t2 = 1.0, 0.0
        if disc > 0.0:
            root = math.sqrt(disc)
            t1 = (-bb - root) / (2.0 * aa)
            t2 = (-bb + root) / (2.0 * aa)
        if disc <= 0.0 or t2 <= 0.0 or t1 >= 1.0:
            # entirely outside (or only touching): keep whole segment
            if not cur:
                cur.append(p)
            cur.append(q)
            continue
        lo, hi = max(t1, 0.0), min(t2, 1.0)
        if lo > 0.0:
            if not cur:
                cur.append(p)
            cur.append(p + lo * d)
        flush()
        if hi < 1.0:
            cur = [p + hi * d, q]
    flush()
    return [Polyline(pts) for pts in pieces]
