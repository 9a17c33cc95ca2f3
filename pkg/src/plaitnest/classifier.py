"""Plaited / nested / unlinked classification of arc families.

Two independent classifiers answer the same question for a finite family
of sampled arcs sharing an endpoint s:

* classify_lift works in the logarithmic cover: every crossing of two
  arcs separates their continued arguments by an exact multiple of 2 pi,
  and the family is plaited when those integers are a coboundary (one
  branch shift per arc normalizes all of them away) and the crossings
  accumulate at s.

* classify_enclosure never lifts: it truncates a small ball around s and
  asks the arrangement whether the union of arcs contains a cycle winding
  around s.

The two must agree; disagreement on any input is a bug in one of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ArgumentJump, NonIntegerOffset
from .geometry.arrangement import Arrangement
from .geometry.primitives import (
    INTERSECT_TOL,
    IntersectionRecord,
    Point2,
    Polyline,
    _winding_of_cycle,
    polyline_intersections,
)
from .verdict import Verdict

# Contacts closer to s than this sit below trustable crossing resolution:
# offsets are not extracted there (accumulation still counts them).
NEAR_FLOOR = 1e-6
# Contacts closer than this are the common-endpoint junction itself.
S_EXCLUSION_FACTOR = 10.0
# Accumulation is certified down to max(ACC_FLOOR, 10 x sampling floor).
ACC_FLOOR = 1e-6
OFFSET_INT_TOL = 1e-6
TRUNCATION_SHRINK = 4.0


@dataclass
class ArcFamily:
    """Finitely many sampled arcs with common first vertex s.

    `groups` assigns arcs to the curves they came from: a projected arc
    and its mirror copy form one group, and the emptiness / accumulation
    hypotheses are tested per group pair (mirror partners never meet, so
    testing them per arc pair would declare every mirrored family
    unlinked). `parities` records which arcs are mirrored copies.
    """

    arcs: list[Polyline]
    common_endpoint: Point2
    groups: Optional[list[int]] = None
    parities: Optional[list[int]] = None

    def __post_init__(self) -> None:
        if not self.arcs:
            raise ValueError("empty family")
        s = self.common_endpoint
        for idx, arc in enumerate(self.arcs):
            v0 = arc.vertices[0]
            if math.hypot(v0[0] - s.x, v0[1] - s.y) > 1e-12:
                raise ValueError(f"arc {idx} does not start at the common endpoint")
            rest = arc.vertices[1:] - [s.x, s.y]
            if np.min(np.hypot(rest[:, 0], rest[:, 1])) <= 1e-12:
                raise ValueError(f"arc {idx} returns to the common endpoint")
        if self.groups is None:
            self.groups = list(range(len(self.arcs)))
        if self.parities is None:
            self.parities = [0] * len(self.arcs)
        if len(self.groups) != len(self.arcs) or len(self.parities) != len(self.arcs):
            raise ValueError("groups/parities length mismatch")

    @property
    def sampling_floor(self) -> float:
        """Smallest vertex spacing beyond each arc's first jump from s."""
        floors = []
        for arc in self.arcs:
            steps = np.hypot(*(arc.vertices[2:] - arc.vertices[1:-1]).T)
            if steps.size:
                floors.append(float(np.min(steps)))
        return min(floors) if floors else 0.0


def lift_arc(arc: Polyline, s: Point2) -> Polyline:
    """Lift an arc to (log r, theta) about s with continuous argument.

    The endpoint vertex (at s) is skipped; the initial argument is taken
    in (-pi, pi] and continued so consecutive gaps stay under pi.
    """
    logr, theta = _lift_coords(arc, s)
    return Polyline(np.column_stack([logr, theta]))


def _lift_coords(arc: Polyline, s: Point2):
    w = arc.vertices[1:] - [s.x, s.y]
    r = np.hypot(w[:, 0], w[:, 1])
    raw = np.arctan2(w[:, 1], w[:, 0])
    d = np.diff(raw)
    wrapped = (d + math.pi) % (2.0 * math.pi) - math.pi
    bad = np.abs(wrapped) >= math.pi * (1.0 - 1e-9)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise ArgumentJump(
            f"vertices {k + 1}..{k + 2} subtend an angle >= pi at the base point")
    theta = np.concatenate([[raw[0]], raw[0] + np.cumsum(wrapped)])
    return np.log(r), theta


@dataclass
class LiftedFamily:
    """Lifts of all arcs plus the per-arc branch shifts chosen so far."""

    lifts: list[Polyline]
    base_offsets: list[int]


def lift_family(family: ArcFamily) -> LiftedFamily:
    s = family.common_endpoint
    return LiftedFamily([lift_arc(a, s) for a in family.arcs],
                        [0] * len(family.arcs))


@dataclass
class _PairContacts:
    records: list[IntersectionRecord] = field(default_factory=list)
    offsets: list[int] = field(default_factory=list)
    radii: list[float] = field(default_factory=list)
    deep_radii: list[float] = field(default_factory=list)
    marginal: bool = False


def _wrap_pi(x: float) -> float:
    return (x + math.pi) % (2.0 * math.pi) - math.pi


def _theta_at(arc: Polyline, theta: np.ndarray, t: float, px: float, py: float,
              s: Point2) -> float:
    """Continued argument of the contact point, anchored at its segment start."""
    cum = arc.cum_lengths
    v = int(np.searchsorted(cum, t, side="right")) - 1
    v = min(max(v, 1), arc.vertices.shape[0] - 1)
    anchor = theta[v - 1]
    return anchor + _wrap_pi(math.atan2(py - s.y, px - s.x) - anchor)


def _family_contacts(family: ArcFamily, tol: float,
                     with_offsets: bool) -> dict[tuple[int, int], _PairContacts]:
    s = family.common_endpoint
    s_cut = S_EXCLUSION_FACTOR * tol
    thetas: list[Optional[np.ndarray]] = [None] * len(family.arcs)

    def theta_of(i: int) -> np.ndarray:
        if thetas[i] is None:
            thetas[i] = _lift_coords(family.arcs[i], s)[1]
        return thetas[i]

    out: dict[tuple[int, int], _PairContacts] = {}
    for i in range(len(family.arcs)):
        for j in range(i + 1, len(family.arcs)):
            pc = _PairContacts()
            for rec in polyline_intersections(family.arcs[i], family.arcs[j], tol):
                radius = math.hypot(rec.point.x - s.x, rec.point.y - s.y)
                if radius <= s_cut:
                    continue
                if radius < NEAR_FLOOR:
                    pc.deep_radii.append(radius)
                    continue
                if with_offsets:
                    ti = _theta_at(family.arcs[i], theta_of(i), rec.t_first,
                                   rec.point.x, rec.point.y, s)
                    tj = _theta_at(family.arcs[j], theta_of(j), rec.t_second,
                                   rec.point.x, rec.point.y, s)
                    m_raw = (ti - tj) / (2.0 * math.pi)
                    m = round(m_raw)
                    if abs(m_raw - m) > OFFSET_INT_TOL:
                        if rec.touch or rec.grazing:
                            # Tolerance touch, not a crossing: unusable for
                            # offsets, still counts toward accumulation.
                            pc.marginal = True
                            pc.deep_radii.append(radius)
                            continue
                        raise NonIntegerOffset(
                            f"arcs {i},{j}: offset {m_raw:.9f} at radius {radius:.3g}")
                    rec.offset = int(m)
                    pc.offsets.append(int(m))
                pc.records.append(rec)
                pc.radii.append(radius)
            out[(i, j)] = pc
    return out


def intersection_offsets(family: ArcFamily,
                         tol: float = INTERSECT_TOL) -> dict[tuple[int, int], set[int]]:
    """Per arc pair, the set of integer branch offsets of their crossings."""
    contacts = _family_contacts(family, tol, with_offsets=True)
    return {pair: set(pc.offsets) for pair, pc in contacts.items()}


def _group_pairs(family: ArcFamily, contacts) -> dict[tuple[int, int], list[float]]:
    """Contact radii (including sub-floor ones) pooled per group pair."""
    pooled: dict[tuple[int, int], list[float]] = {}
    gset = sorted(set(family.groups))
    for a in range(len(gset)):
        for b in range(a + 1, len(gset)):
            pooled[(gset[a], gset[b])] = []
    for (i, j), pc in contacts.items():
        gi, gj = family.groups[i], family.groups[j]
        if gi == gj:
            continue
        key = (min(gi, gj), max(gi, gj))
        pooled[key].extend(pc.radii)
        pooled[key].extend(pc.deep_radii)
    return pooled


def _accumulation_floor(family: ArcFamily) -> float:
    return max(ACC_FLOOR, 10.0 * family.sampling_floor)


def _accumulates(radii: list[float], floor: float) -> bool:
    """Do the contact radii fill every dyadic ball down to the floor?

    Balls shrink by halving from the largest contact radius; the chain is
    certified when each ball, down to the last one above the floor, holds
    a contact.
    """
    if not radii:
        return False
    rho = max(radii)
    smallest = min(radii)
    if rho <= floor:
        return True
    levels = int(math.floor(math.log2(rho / floor)))
    rho_last = rho * 2.0 ** (-levels)
    return smallest <= rho_last


def _coboundary(n_arcs: int, singleton: dict[tuple[int, int], int]) -> Optional[list[int]]:
    """Integers c with m_ij = c_i - c_j for all pairs, or None."""
    c: list[Optional[int]] = [None] * n_arcs
    adj: dict[int, list[tuple[int, int]]] = {}
    for (i, j), m in singleton.items():
        adj.setdefault(i, []).append((j, m))
        adj.setdefault(j, []).append((i, -m))
    for root in range(n_arcs):
        if c[root] is not None:
            continue
        c[root] = 0
        stack = [root]
        while stack:
            i = stack.pop()
            for j, m in adj.get(i, ()):
                # m is the offset of (i, j): m = c_i - c_j.
                want = c[i] - m
                if c[j] is None:
                    c[j] = want
                    stack.append(j)
                elif c[j] != want:
                    return None
    return [v if v is not None else 0 for v in c]


@dataclass
class ClassificationReport:
    verdict: Verdict
    offsets: dict[tuple[int, int], list[int]]
    marginal: bool
    coboundary: Optional[list[int]] = None
    witness_cycle: Optional[np.ndarray] = None
    accumulation_floor: float = ACC_FLOOR

    def to_json(self) -> dict:
        obj = {
            "classification": self.verdict.value,
            "offsets": {f"{i},{j}": sorted(v) for (i, j), v in self.offsets.items()},
            "marginal": self.marginal,
        }
        if self.witness_cycle is not None:
            obj["witness_cycle"] = [[float(x), float(y)] for x, y in self.witness_cycle]
        return obj


def classify_lift(family: ArcFamily, tol: float = INTERSECT_TOL) -> Verdict:
    return lift_report(family, tol).verdict


def lift_report(family: ArcFamily, tol: float = INTERSECT_TOL) -> ClassificationReport:
    """Offset-based classification with the full evidence attached."""
    contacts = _family_contacts(family, tol, with_offsets=True)
    offsets = {pair: sorted(set(pc.offsets)) for pair, pc in contacts.items()}
    marginal = any(pc.marginal for pc in contacts.values())
    report = ClassificationReport(Verdict.UNLINKED, offsets, marginal)

    pooled = _group_pairs(family, contacts)
    if not pooled or any(not radii for radii in pooled.values()):
        return report

    # (i) every crossing pair carries a single offset
    for pc in contacts.values():
        if len(set(pc.offsets)) > 1:
            report.verdict = Verdict.NESTED
            return report
    # (ii) the single offsets are a coboundary
    singleton = {pair: pc.offsets[0] for pair, pc in contacts.items() if pc.offsets}
    cob = _coboundary(len(family.arcs), singleton)
    if cob is None:
        report.verdict = Verdict.NESTED
        return report
    report.coboundary = cob
    # (iii) crossings accumulate at s in every group pair
    floor = _accumulation_floor(family)
    report.accumulation_floor = floor
    if all(_accumulates(radii, floor) for radii in pooled.values()):
        report.verdict = Verdict.PLAITED
    return report


def _clip_annulus(family: ArcFamily, rho: float, outer: float) -> list[Polyline]:
    """Arc pieces whose vertices lie in the annulus rho <= |z - s| <= outer."""
    s = family.common_endpoint
    pieces = []
    for arc in family.arcs:
        w = arc.vertices - [s.x, s.y]
        r = np.hypot(w[:, 0], w[:, 1])
        ok = (r >= rho) & (r <= outer)
        idx = np.flatnonzero(ok)
        if idx.size < 2:
            continue
        splits = np.flatnonzero(np.diff(idx) > 1)
        for run in np.split(idx, splits + 1):
            if run.size >= 2:
                pieces.append(Polyline(arc.vertices[run]))
    return pieces


def _enclosure_scan(family: ArcFamily, tol: float):
    """Truncation ladder: (enclosed?, witness cycle, contacts)."""
    contacts = _family_contacts(family, tol, with_offsets=False)
    radii = [r for pc in contacts.values() for r in pc.radii]
    if not radii:
        return False, None, contacts
    s = family.common_endpoint
    floor = _accumulation_floor(family)
    outer = 4.0 * max(radii)
    rho = 2.0 * max(radii)
    while rho > floor:
        pieces = _clip_annulus(family, rho, outer)
        if pieces:
            arr = Arrangement(pieces, tol)
            for cyc in arr.face_cycles:
                if _winding_of_cycle(cyc, s.x, s.y) != 0:
                    return True, cyc, contacts
        rho /= TRUNCATION_SHRINK
    return False, None, contacts


def classify_enclosure(family: ArcFamily, tol: float = INTERSECT_TOL) -> Verdict:
    return enclosure_report(family, tol).verdict


def enclosure_report(family: ArcFamily, tol: float = INTERSECT_TOL) -> ClassificationReport:
    """Disc-enclosure classification; never consults the lifts."""
    enclosed, witness, contacts = _enclosure_scan(family, tol)
    report = ClassificationReport(Verdict.UNLINKED, {}, False,
                                  witness_cycle=witness)
    pooled = _group_pairs(family, contacts)
    if not pooled or any(not radii for radii in pooled.values()):
        return report
    if enclosed:
        report.verdict = Verdict.NESTED
        return report
    floor = _accumulation_floor(family)
    report.accumulation_floor = floor
    if all(_accumulates(radii, floor) for radii in pooled.values()):
        report.verdict = Verdict.PLAITED
    return report


def local_family(curves: list[Polyline], anchor: Point2,
                 trim: float = 1e-9) -> ArcFamily:
    """Split curves at their closest approach to `anchor` into an ArcFamily.

    Each curve contributes its two half-branches (where present) as arcs
    of one group, so the family can be classified locally around a
    crossing point of e.g. a stage curve with the base.
    """
    arcs = []
    groups = []
    for gi, c in enumerate(curves):
        t = c.nearest_param(anchor)
        seg = int(np.searchsorted(c.cum_lengths, t, side="right")) - 1
        seg = max(0, min(seg, c.segment_count - 1))
        # bridge straight from the anchor to the bracketing vertices; the
        # two halves must leave the anchor along different segments, or
        # their shared lead-in would register as a collinear overlap
        for half in (c.vertices[: seg + 1][::-1], c.vertices[seg + 1:]):
            if half.shape[0] == 0:
                continue
            w = half - [anchor.x, anchor.y]
            r = np.hypot(w[:, 0], w[:, 1])
            keep = np.flatnonzero(r > trim)
            if keep.size == 0:
                continue
            pts = [np.array([anchor.x, anchor.y])]
            for p in half[keep[0]:]:
                if math.hypot(p[0] - pts[-1][0], p[1] - pts[-1][1]) > 1e-12:
                    pts.append(p)
            if len(pts) >= 2:
                arcs.append(Polyline(np.array(pts)))
                groups.append(gi)
    return ArcFamily(arcs, anchor, groups=groups)
