"""Stage curves of a two-contraction substitution system.

A rectangle R is crossed by a straight base arc; two affine contractions
S_1, S_2 carry R into disjoint sub-rectangles, each crossing the base in
its image. A template curve runs through R, traversing each cell S_j(R)
along a designated connector between the spliced points S_j(A), S_j(B)
(A, B the template endpoints). Each stage replaces every cell's content
by the contracted image of the whole previous stage:

    stage(0) = template
    stage(n+1) = wiring ∪ S_1(stage(n)) ∪ S_2(stage(n))

The base itself is forward invariant (S_j maps it into itself), so the
base component of the mapped pair never needs drawing: its image is a
sub-segment of the base already present. Intersections of stage curves
with the base accumulate on the Cantor set of the system, and a suitably
looped wiring makes the union of base and stage curve enclose every
cell, nesting round that Cantor set.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import SelfIntersection, SpliceMismatch
from .geometry.arrangement import Arrangement
from .geometry.primitives import (
    INTERSECT_TOL,
    IntersectionRecord,
    Point2,
    Polyline,
    _winding_of_cycle,
    clip_away_ball,
    polyline_intersections,
    self_intersections,
)

DEFAULT_MAX_STAGE = 6
SPLICE_TOL = 1e-9
# Enclosure answers must agree on this many consecutive puncture radii.
PUNCTURE_STREAK = 3
PUNCTURE_SHRINK = 4.0


class Contraction:
    """Affine map z -> linear @ z + translation with operator norm <= 1.

    Compositions of contractions (and the identity, for the empty word)
    are admitted; the generating maps of a system are checked separately
    for strict contraction.
    """

    __slots__ = ("linear", "translation")

    def __init__(self, linear, translation) -> None:
        lin = np.asarray(linear, dtype=np.float64).reshape(2, 2)
        tr = np.asarray(translation, dtype=np.float64).reshape(2)
        if not (np.all(np.isfinite(lin)) and np.all(np.isfinite(tr))):
            raise ValueError("non-finite affine data")
        if abs(np.linalg.det(lin)) < 1e-15:
            raise ValueError("affine map is not injective")
        if np.linalg.norm(lin, 2) > 1.0 + 1e-12:
            raise ValueError("operator norm exceeds 1")
        self.linear = lin
        self.translation = tr
        self.linear.setflags(write=False)
        self.translation.setflags(write=False)

    @property
    def ratio(self) -> float:
        return float(np.linalg.norm(self.linear, 2))

    @staticmethod
    def identity() -> "Contraction":
        return Contraction(np.eye(2), np.zeros(2))

    @staticmethod
    def similarity(scale: float, tx: float, ty: float) -> "Contraction":
        return Contraction(np.eye(2) * scale, (tx, ty))

    def apply(self, pts):
        if isinstance(pts, Point2):
            v = self.linear @ (pts.x, pts.y) + self.translation
            return Point2(float(v[0]), float(v[1]))
        return np.asarray(pts, dtype=np.float64) @ self.linear.T + self.translation

    def inverse_apply(self, pts):
        arr = np.asarray(pts, dtype=np.float64)
        return np.linalg.solve(self.linear, (arr - self.translation).T).T

    def after(self, other: "Contraction") -> "Contraction":
        """self ∘ other."""
        return Contraction(self.linear @ other.linear,
                           self.linear @ other.translation + self.translation)

    def __repr__(self) -> str:
        return f"Contraction({self.linear.tolist()}, {self.translation.tolist()})"


def compose(system: "SubstitutionSystem", word: Sequence[int]) -> Contraction:
    """S_{w_1} ∘ S_{w_2} ∘ ... for a word over {1, 2}; empty = identity."""
    out = Contraction.identity()
    for j in word:
        if j not in (1, 2):
            raise ValueError(f"word letter {j} not in {{1, 2}}")
        out = out.after(system.maps[j - 1])
    return out


@dataclass(frozen=True)
class Slot:
    """Template vertex indices of one cell's replaced connector."""
    entry: int
    exit: int


@dataclass
class StageCurve:
    n: int
    curve: Polyline
    dirty_regions: list  # corner quads of all depth-(n+1) cells
    changed_regions: list  # corner quads of the depth-n cells


class SubstitutionSystem:
    def __init__(self, domain, base: Polyline, maps, template: Polyline,
                 slots: Sequence[Slot], variant: str = "custom",
                 max_stage: int = DEFAULT_MAX_STAGE,
                 tol: float = INTERSECT_TOL) -> None:
        self.domain = tuple(float(v) for v in domain)  # (x0, x1, y0, y1)
        x0, x1, y0, y1 = self.domain
        if not (x0 < x1 and y0 < y1):
            raise ValueError("degenerate domain rectangle")
        self.base = base
        self.maps = tuple(maps)
        self.template = template
        self.slots = list(slots)
        self.variant = variant
        self.max_stage = int(max_stage)
        self.tol = float(tol)
        self._stages: dict[int, StageCurve] = {}
        if len(self.maps) != 2 or len(self.slots) != 2:
            raise ValueError("exactly two contractions and two slots expected")
        for m in self.maps:
            if m.ratio >= 1.0:
                raise ValueError("generating map is not a strict contraction")
        self._validate()

    # -- structure checks ------------------------------------------------

    def _validate(self) -> None:
        tv = self.template.vertices
        a, b = tv[0], tv[-1]
        x0, x1, y0, y1 = self.domain
        for p in (a, b):
            on_edge = (abs(p[0] - x0) < 1e-9 or abs(p[0] - x1) < 1e-9 or
                       abs(p[1] - y0) < 1e-9 or abs(p[1] - y1) < 1e-9)
            if not on_edge:
                raise ValueError("template endpoint not on the domain boundary")
        cells = [self.cell_corners((j,)) for j in (1, 2)]
        for j, cell in enumerate(cells):
            if np.any(cell[:, 0] <= x0) or np.any(cell[:, 0] >= x1) or \
               np.any(cell[:, 1] <= y0) or np.any(cell[:, 1] >= y1):
                raise ValueError(f"cell {j + 1} not inside the open domain")
        # disjoint cells: bounding boxes must not overlap
        (ax0, ax1, ay0, ay1), (bx0, bx1, by0, by1) = (self._bbox(c) for c in cells)
        if ax0 < bx1 and bx0 < ax1 and ay0 < by1 and by0 < ay1:
            raise ValueError("cell images overlap")
        # base forward invariance
        for m in self.maps:
            img = m.apply(self.base.vertices)
            for p in img:
                if self.base.distance_to((p[0], p[1])) > SPLICE_TOL:
                    raise SpliceMismatch("mapped base leaves the base arc")
        # splice points
        for m, slot in zip(self.maps, self.slots):
            if not (0 < slot.entry < slot.exit < tv.shape[0] - 1):
                raise ValueError("slot indices out of order")
            ea = m.apply(tv[0])
            eb = m.apply(tv[-1])
            if math.hypot(*(tv[slot.entry] - ea)) > SPLICE_TOL:
                raise SpliceMismatch("slot entry vertex differs from S_j(A)")
            if math.hypot(*(tv[slot.exit] - eb)) > SPLICE_TOL:
                raise SpliceMismatch("slot exit vertex differs from S_j(B)")
        # connectors confined to their cells; wiring outside both open cells
        for (j, slot), cell in zip(enumerate(self.slots), cells):
            cx0, cx1, cy0, cy1 = self._bbox(cell)
            seg = tv[slot.entry: slot.exit + 1]
            if np.any(seg[:, 0] < cx0 - 1e-9) or np.any(seg[:, 0] > cx1 + 1e-9) or \
               np.any(seg[:, 1] < cy0 - 1e-9) or np.any(seg[:, 1] > cy1 + 1e-9):
                raise ValueError(f"connector {j + 1} leaves its cell")
        for j, cell in enumerate(cells):
            box = self._bbox(cell)
            spans = [(0, self.slots[0].entry), (self.slots[0].exit, self.slots[1].entry),
                     (self.slots[1].exit, tv.shape[0] - 1)]
            for lo, hi in spans:
                for i in range(lo, hi):
                    if _segment_enters_box(tv[i], tv[i + 1], box):
                        raise ValueError(
                            f"wiring segment {i} enters cell {j + 1}")
        if self_intersections(self.template, self.tol):
            raise SelfIntersection("template is not a simple arc")
        # fixed reference point: midpoint of the base chord
        mid = 0.5 * (self.base.vertices[0] + self.base.vertices[-1])
        self.reference = Point2(float(mid[0]), float(mid[1]))

    @staticmethod
    def _bbox(corners: np.ndarray):
        return (float(np.min(corners[:, 0])), float(np.max(corners[:, 0])),
                float(np.min(corners[:, 1])), float(np.max(corners[:, 1])))

    def cell_corners(self, word: Sequence[int]) -> np.ndarray:
        x0, x1, y0, y1 = self.domain
        quad = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
        return compose(self, word).apply(quad)

    def words(self, depth: int):
        return list(itertools.product((1, 2), repeat=depth))

    # -- stages ----------------------------------------------------------

    def stage(self, n: int) -> StageCurve:
        if n < 0:
            raise ValueError("stage index must be >= 0")
        if n > self.max_stage:
            raise ValueError(f"stage {n} above the configured cap {self.max_stage}")
        if n in self._stages:
            return self._stages[n]
        if n == 0:
            verts = self.template.vertices
        else:
            verts = self._assemble(self.stage(n - 1).curve.vertices)
        curve = Polyline(verts)
        hits = self_intersections(curve, self.tol)
        if hits:
            p = hits[0].point
            raise SelfIntersection(
                f"stage {n} self-intersects at ({p.x:.6g}, {p.y:.6g})"
                f" in cell {self._word_at(p) or 'wiring'}")
        sc = StageCurve(n, curve,
                        [self.cell_corners(w) for w in self.words(n + 1)],
                        [self.cell_corners(w) for w in self.words(n)])
        self._stages[n] = sc
        return sc

    def _assemble(self, prev: np.ndarray) -> np.ndarray:
        tv = self.template.vertices
        chunks = []
        pos = 0
        for m, slot in zip(self.maps, self.slots):
            chunks.append(tv[pos: slot.entry + 1])
            content = m.apply(prev)
            if math.hypot(*(content[0] - tv[slot.entry])) > SPLICE_TOL or \
               math.hypot(*(content[-1] - tv[slot.exit])) > SPLICE_TOL:
                raise SpliceMismatch("cell content does not meet the splice points")
            chunks.append(content)
            pos = slot.exit
        chunks.append(tv[pos:])
        out = [chunks[0]]
        for c in chunks[1:]:
            if math.hypot(*(c[0] - out[-1][-1])) <= 1e-12:
                c = c[1:]
            out.append(c)
        return np.vstack(out)

    def _word_at(self, p: Point2, max_depth: int = 8):
        """Deepest cell word containing p, as a string, or None."""
        x0, x1, y0, y1 = self.domain
        word = []
        for _ in range(max_depth):
            found = False
            for j in (1, 2):
                q = self.maps[j - 1].inverse_apply(np.array([[p.x, p.y]]))[0]
                if x0 - 1e-12 <= q[0] <= x1 + 1e-12 and y0 - 1e-12 <= q[1] <= y1 + 1e-12:
                    word.append(j)
                    p = Point2(float(q[0]), float(q[1]))
                    found = True
                    break
            if not found:
                break
        return "".join(map(str, word)) or None

    def in_cells(self, pts: np.ndarray, depth: int) -> np.ndarray:
        """Mask of points lying in some depth-`depth` cell (closed)."""
        x0, x1, y0, y1 = self.domain
        mask = np.zeros(len(pts), dtype=bool)
        for w in self.words(depth):
            q = compose(self, w).inverse_apply(pts)
            mask |= ((q[:, 0] >= x0 - 1e-12) & (q[:, 0] <= x1 + 1e-12) &
                     (q[:, 1] >= y0 - 1e-12) & (q[:, 1] <= y1 + 1e-12))
        return mask

    # -- derived queries -------------------------------------------------

    def attractor_points(self, depth: int) -> list[Point2]:
        if depth < 1:
            raise ValueError("depth must be >= 1")
        return [compose(self, w).apply(self.reference) for w in self.words(depth)]

    def stage_intersections(self, n: int) -> list[IntersectionRecord]:
        """Transverse crossings of stage(n) with the base, sorted along it."""
        return polyline_intersections(self.base, self.stage(n).curve, self.tol)

    def nesting_witnesses(self, n: int, depth: int) -> list[bool]:
        """Per attractor point: does base ∪ stage(n) enclose it?

        Targets sit on the base, so the test punctures a ball around each
        target and accepts the enclosure answer once it is stable on
        three consecutive radii of a rho -> rho/4 ladder.
        """
        if depth < 0:
            raise ValueError("depth must be >= 0")
        if depth > n:
            raise ValueError("witness depth exceeds the stage index")
        targets = [self.reference] if depth == 0 else self.attractor_points(depth)
        curve = self.stage(n).curve
        out = []
        for i, t in enumerate(targets):
            word = self.words(depth)[i] if depth else ()
            corners = self.cell_corners(word)
            bx0, bx1, by0, by1 = self._bbox(corners)
            rho = 0.2 * min(bx1 - bx0, by1 - by0)
            out.append(self._punctured_enclosed([self.base, curve], t, rho))
        return out

    def _punctured_enclosed(self, curves, target: Point2, rho0: float) -> bool:
        prev = None
        streak = 0
        rho = rho0
        while rho > 100.0 * self.tol:
            pieces = []
            for c in curves:
                pieces.extend(clip_away_ball(c.vertices, target.x, target.y, rho))
            ans = False
            if pieces:
                arr = Arrangement(pieces, self.tol)
                ans = any(_winding_of_cycle(cyc, target.x, target.y) != 0
                          for cyc in arr.face_cycles)
            if ans == prev:
                streak += 1
                if streak >= PUNCTURE_STREAK - 1:
                    return ans
            else:
                prev = ans
                streak = 0
            rho /= PUNCTURE_SHRINK
        return bool(prev)

    def self_similarity_period(self, n_max: int = DEFAULT_MAX_STAGE) -> Optional[int]:
        """Least p with identical normalized per-cell crossing patterns
        between stages n and n+p, for all computed n >= 1; None if no
        period <= n_max/2 fits."""
        if n_max < 6:
            raise ValueError("n_max must be >= 6")
        if n_max > self.max_stage:
            raise ValueError("n_max above the configured stage cap")
        patterns = [self._stage_pattern(n) for n in range(1, n_max + 1)]
        return _least_period(patterns, n_max // 2)

    def _stage_pattern(self, n: int):
        """Set of distinct per-cell crossing patterns at depth n.

        Each pattern is the sign + position sequence of stage(n)'s base
        crossings inside one depth-n cell, pulled back by the cell word.
        """
        curve = self.stage(n).curve
        cum = curve.cum_lengths
        recs = self.stage_intersections(n)
        pts = np.array([[r.point.x, r.point.y] for r in recs]) if recs else \
            np.empty((0, 2))
        tangents = []
        for r in recs:
            v = int(np.searchsorted(cum, r.t_second, side="right")) - 1
            v = min(max(v, 0), curve.vertices.shape[0] - 2)
            tangents.append(curve.vertices[v + 1] - curve.vertices[v])
        pats = set()
        x0, x1, y0, y1 = self.domain
        for w in self.words(n):
            cw = compose(self, w)
            cell_pat = []
            if len(pts):
                q = cw.inverse_apply(pts)
                inside = ((q[:, 0] >= x0 - 1e-9) & (q[:, 0] <= x1 + 1e-9) &
                          (q[:, 1] >= y0 - 1e-9) & (q[:, 1] <= y1 + 1e-9))
                inv_lin = np.linalg.inv(cw.linear)
                for idx in np.flatnonzero(inside):
                    d = inv_lin @ tangents[idx]
                    cell_pat.append((round(float(q[idx, 0]), 6),
                                     1 if d[1] > 0 else -1))
            pats.add(tuple(sorted(cell_pat)))
        return frozenset(pats)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain),
            "base": self.base.vertices.tolist(),
            "maps": [{"linear": m.linear.tolist(),
                      "translation": m.translation.tolist()} for m in self.maps],
            "template": self.template.vertices.tolist(),
            "slots": [{"entry": s.entry, "exit": s.exit} for s in self.slots],
            "variant": self.variant,
        }

    @staticmethod
    def from_json(obj: dict, max_stage: int = DEFAULT_MAX_STAGE,
                  tol: float = INTERSECT_TOL) -> "SubstitutionSystem":
        maps = [Contraction(m["linear"], m["translation"]) for m in obj["maps"]]
        return SubstitutionSystem(
            obj["domain"], Polyline(obj["base"]), maps, Polyline(obj["template"]),
            [Slot(int(s["entry"]), int(s["exit"])) for s in obj["slots"]],
            variant=obj.get("variant", "custom"), max_stage=max_stage, tol=tol)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1)

    @staticmethod
    def load(path, max_stage: int = DEFAULT_MAX_STAGE,
             tol: float = INTERSECT_TOL) -> "SubstitutionSystem":
        with open(path, encoding="utf-8") as fh:
            return SubstitutionSystem.from_json(json.load(fh),
                                                max_stage=max_stage, tol=tol)


def _least_period(patterns: Sequence, p_max: int) -> Optional[int]:
    """Least p in [1, p_max] with patterns[i] == patterns[i + p] for all i."""
    for p in range(1, p_max + 1):
        if all(patterns[i] == patterns[i + p]
               for i in range(len(patterns) - p)):
            return p
    return None


def _segment_enters_box(p, q, box, eps: float = 1e-9) -> bool:
    """Does segment pq meet the open rectangle's interior?"""
    bx0, bx1, by0, by1 = box
    t0, t1 = 0.0, 1.0
    for pv, qv, lo, hi in ((p[0], q[0], bx0, bx1), (p[1], q[1], by0, by1)):
        d = qv - pv
        if abs(d) < 1e-15:
            if not (lo + eps < pv < hi - eps):
                return False
            continue
        ta = (lo + eps - pv) / d
        tb = (hi - eps - pv) / d
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
        if t0 >= t1:
            return False
    return True


# -- built-in systems ----------------------------------------------------

def builtin_system(variant: str, max_stage: int = DEFAULT_MAX_STAGE,
                   tol: float = INTERSECT_TOL) -> SubstitutionSystem:
    """The shipped nesting and plaiting systems (ratio-1/5 similarities)."""
    if variant not in ("nesting", "plaiting"):
        raise ValueError(f"unknown builtin variant {variant!r}")
    s1 = Contraction.similarity(0.2, 0.1, 0.0)
    s2 = Contraction.similarity(0.2, 0.7, 0.0)
    a = np.array([0.0, -0.6])
    b = np.array([1.0, -0.6])
    # connector through cell j: entry S_j(A), a bump over the cell's base
    # sub-segment, exit S_j(B)
    def connector(m):
        e_in = m.apply(a)
        e_out = m.apply(b)
        mid = 0.5 * (e_in + e_out)
        w = e_out[0] - e_in[0]
        return [e_in,
                [e_in[0] + 0.2 * w, 0.08],
                [mid[0] + 0.3 * w, 0.08],
                e_out]

    if variant == "nesting":
        wiring_pre = [a, [0.02, -0.6], [0.02, 0.38], [0.04, 0.38], [0.04, -0.3],
                      [0.34, -0.3], [0.34, 0.3], [0.06, 0.3], [0.06, -0.08],
                      [0.08, -0.12]]
        wiring_mid = [[0.31, -0.24], [0.05, -0.24], [0.05, 0.36], [0.42, 0.36],
                      [0.44, 0.12], [0.46, -0.06], [0.54, -0.06], [0.56, 0.12],
                      [0.58, 0.36], [0.64, 0.36], [0.64, -0.3], [0.94, -0.3],
                      [0.94, 0.3], [0.66, 0.3], [0.66, -0.08], [0.68, -0.12]]
        wiring_post = [[0.91, -0.24], [0.65, -0.24], [0.65, 0.36], [0.97, 0.36],
                       [0.97, -0.45], b]
    else:
        wiring_pre = [a, [0.04, -0.5], [0.04, -0.12]]
        wiring_mid = [[0.36, -0.08], [0.4, 0.08], [0.46, 0.08], [0.5, -0.08],
                      [0.54, -0.08], [0.58, 0.08], [0.62, 0.08], [0.66, -0.1]]
        wiring_post = [[0.96, -0.3], b]

    conn1 = connector(s1)
    conn2 = connector(s2)
    verts = wiring_pre + conn1 + wiring_mid + conn2 + wiring_post
    entry1 = len(wiring_pre)
    exit1 = entry1 + len(conn1) - 1
    entry2 = exit1 + len(wiring_mid) + 1
    exit2 = entry2 + len(conn2) - 1
    return SubstitutionSystem(
        (0.0, 1.0, -1.0, 1.0), Polyline([[0.0, 0.0], [1.0, 0.0]]),
        (s1, s2), Polyline(np.array(verts, dtype=np.float64)),
        [Slot(entry1, exit1), Slot(entry2, exit2)],
        variant=variant, max_stage=max_stage, tol=tol)
