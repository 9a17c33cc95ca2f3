"""Arrangement of polylines and disc-enclosure queries.

Curves are split at their mutual (and self) crossings, crossing points are
clustered into nodes, and faces are traced with the usual rotational sweep
(sort outgoing half-edges by angle, walk next = clockwise-after-twin). A
target is enclosed by the union iff some face-boundary cycle has nonzero
winding about it, which happens exactly when the target sits in a bounded
face. Everything is tolerance-based; inputs are synthetic and
well-conditioned.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DegenerateArrangement, PointOnBoundary
from . import kernels
from .primitives import INTERSECT_TOL, Point2, Polyline, _winding_of_cycle


class _Clusters:
    """Union-find point clustering on a quantized grid."""

    def __init__(self, snap: float) -> None:
        self.snap = snap
        self.points: list[tuple[float, float]] = []
        self.parent: list[int] = []
        self.grid: dict[tuple[int, int], list[int]] = {}

    def _find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def add(self, x: float, y: float) -> int:
        cx = math.floor(x / self.snap)
        cy = math.floor(y / self.snap)
        for nx in (cx - 1, cx, cx + 1):
            for ny in (cy - 1, cy, cy + 1):
                for j in self.grid.get((nx, ny), ()):
                    px, py = self.points[j]
                    if abs(px - x) <= self.snap and abs(py - y) <= self.snap:
                        return self._find(j)
        i = len(self.points)
        self.points.append((x, y))
        self.parent.append(i)
        self.grid.setdefault((cx, cy), []).append(i)
        return i


class Arrangement:
    """Split curves, nodes, half-edge rotation system, traced face cycles."""

    def __init__(self, curves: list[Polyline], tol: float = INTERSECT_TOL) -> None:
        self.tol = tol
        self.curves = curves
        cuts: list[list[tuple[float, float, float]]] = [[] for _ in curves]

        for ci, c in enumerate(curves):
            rows = kernels.self_crossings(c.vertices, tol)
            self._harvest(rows, ci, ci, cuts)
        for ci in range(len(curves)):
            for cj in range(ci + 1, len(curves)):
                rows = kernels.polyline_crossings(
                    curves[ci].vertices, curves[cj].vertices, tol)
                self._harvest(rows, ci, cj, cuts)

        snap = max(2.0 * tol, 1e-12)
        clusters = _Clusters(snap)
        self.edges: list[tuple[int, int, np.ndarray]] = []
        for ci, c in enumerate(curves):
            self._split_curve(c, cuts[ci], clusters)
        self.node_xy = np.array(clusters.points) if clusters.points else np.empty((0, 2))
        self._build_faces()

    def _harvest(self, rows: np.ndarray, ci: int, cj: int, cuts) -> None:
        for row in rows:
            i, j, s, t = int(row[0]), int(row[1]), row[2], row[3]
            if row[6] == 2.0:
                raise DegenerateArrangement(
                    f"collinear overlap between curves {ci} and {cj}")
            cuts[ci].append((self.curves[ci].param_of(i, s), row[4], row[5]))
            cuts[cj].append((self.curves[cj].param_of(j, t), row[4], row[5]))

    def _split_curve(self, c: Polyline, cut_list, clusters: _Clusters) -> None:
        cum = c.cum_lengths
        total = c.length
        params = [(0.0, c.vertices[0, 0], c.vertices[0, 1]),
                  (total, c.vertices[-1, 0], c.vertices[-1, 1])]
        for t, x, y in cut_list:
            params.append((min(max(t, 0.0), total), x, y))
        params.sort(key=lambda e: e[0])

        merged: list[tuple[float, float, float]] = []
        for t, x, y in params:
            if merged and t - merged[-1][0] <= self.tol:
                continue
            merged.append((t, x, y))

        nodes = [clusters.add(x, y) for _, x, y in merged]
        for a in range(len(merged) - 1):
            t0, t1 = merged[a][0], merged[a + 1][0]
            if t1 - t0 <= self.tol:
                raise DegenerateArrangement(
                    f"edge of length {t1 - t0:.3g} after splitting")
            u, v = nodes[a], nodes[a + 1]
            lo = int(np.searchsorted(cum, t0 + self.tol, side="right"))
            hi = int(np.searchsorted(cum, t1 - self.tol, side="left"))
            pts = [np.asarray(clusters.points[u])]
            for pb in c.vertices[lo:hi]:
                if math.hypot(pb[0] - pts[-1][0], pb[1] - pts[-1][1]) > 1e-12:
                    pts.append(pb)
            end = np.asarray(clusters.points[v])
            while len(pts) > 1 and math.hypot(pts[-1][0] - end[0],
                                              pts[-1][1] - end[1]) <= 1e-12:
                pts.pop()
            pts.append(end)
            geom = np.array(pts)
            if (math.hypot(*(geom[1] - geom[0])) <= 1e-12
                    or math.hypot(*(geom[-1] - geom[-2])) <= 1e-12):
                raise DegenerateArrangement(
                    f"sliver edge near ({geom[0][0]:.6g}, {geom[0][1]:.6g})")
            self.edges.append((u, v, geom))

    def _build_faces(self) -> None:
        # Two directed half-edges per edge; he 2e = forward (u->v), 2e+1 = back.
        out_at: dict[int, list[tuple[float, int]]] = {}
        n_he = 2 * len(self.edges)
        for e, (u, v, geom) in enumerate(self.edges):
            fwd = math.atan2(geom[1, 1] - geom[0, 1], geom[1, 0] - geom[0, 0])
            bwd = math.atan2(geom[-2, 1] - geom[-1, 1], geom[-2, 0] - geom[-1, 0])
            out_at.setdefault(u, []).append((fwd, 2 * e))
            out_at.setdefault(v, []).append((bwd, 2 * e + 1))

        nxt = np.full(n_he, -1, dtype=int)
        for node, lst in out_at.items():
            lst.sort()
            deg = len(lst)
            for pos, (_, he) in enumerate(lst):
                # next of the half-edge arriving along twin(he): the outgoing
                # half-edge clockwise from he at this node.
                arriving = he ^ 1
                nxt[arriving] = lst[(pos - 1) % deg][1]

        seen = np.zeros(n_he, dtype=bool)
        self.face_cycles: list[np.ndarray] = []
        for start in range(n_he):
            if seen[start] or nxt[start] < 0:
                continue
            walk = []
            h = start
            while not seen[h]:
                seen[h] = True
                walk.append(h)
                h = nxt[h]
            pts = []
            for he in walk:
                geom = self.edges[he // 2][2]
                if he & 1:
                    geom = geom[::-1]
                pts.append(geom[:-1])
            pts.append(pts[0][:1])
            self.face_cycles.append(np.concatenate(pts))

    def winding_cycles(self, p) -> list[int]:
        px, py = float(p[0]), float(p[1])
        return [_winding_of_cycle(np.vstack([cyc, cyc[:1]]), px, py)
                for cyc in self.face_cycles]

    def distance_to(self, p) -> float:
        return min(c.distance_to(p) for c in self.curves)


def enclosure_check(curves: list[Polyline], targets, tol: float = INTERSECT_TOL) -> list[bool]:
    """For each target, does the union of curves contain a cycle around it?"""
    arr = Arrangement(curves, tol)
    answers = []
    for p in targets:
        if arr.distance_to(p) <= tol:
            raise PointOnBoundary(f"target {tuple(p)} lies on a curve")
        answers.append(any(w != 0 for w in arr.winding_cycles(p)))
    return answers


def enclosing_cycle(curves: list[Polyline], target, tol: float = INTERSECT_TOL):
    """A face cycle with nonzero winding about target, or None.

    The returned array is a closed vertex chain through crossing nodes of
    the union; used as the nesting witness in classifier reports.
    """
    arr = Arrangement(curves, tol)
    if arr.distance_to(target) <= tol:
        raise PointOnBoundary(f"target {tuple(target)} lies on a curve")
    px, py = float(target[0]), float(target[1])
    for cyc in arr.face_cycles:
        if _winding_of_cycle(np.vstack([cyc, cyc[:1]]), px, py) != 0:
            return np.vstack([cyc, cyc[:1]])
    return None
