"""The explicit spiral sine family and its closed-form crossing equation.

Lifted arcs live in the (x, y) strip as graphs y = a sin(x - 2 pi k / N)
+ pi n; the exponential map sends them to arcs spiralling into the origin.
Crossings of two lifted branches obey

    a (sin(x - 2 pi k / N) - sin(x - 2 pi l / N)) = pi delta,

whose left side collapses to a single cosine, so roots come in closed
form and the largest attainable delta gives the plaiting/nesting
threshold in the amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateAmplitude, IdenticalArcs, WindowTooCoarse
from .geometry.primitives import Point2, Polyline
from .verdict import Verdict

DEFAULT_WINDOW = (-8.0 * math.pi, 4.0 * math.pi)
VERTEX_BUDGET = 10 ** 6
# Classifier-grade sampling step of the lift coordinate.
FAMILY_STEP = 0.04
# Image-plane spacing under which further left-tail vertices are pointless.
SPACING_FLOOR = 1e-11
DELTA_MAX = 3


@dataclass(frozen=True)
class SineFamilyParams:
    n_arcs: int
    amplitude: float
    window: tuple[float, float] = DEFAULT_WINDOW

    def __post_init__(self) -> None:
        if self.n_arcs < 2:
            raise ValueError(f"need at least 2 arcs, got {self.n_arcs}")
        lo, hi = self.window
        if not lo < hi:
            raise ValueError(f"empty window {self.window}")
        object.__setattr__(self, "window", (float(lo), float(hi)))

    def to_json(self) -> dict:
        return {"n_arcs": self.n_arcs, "amplitude": self.amplitude,
                "window": [self.window[0], self.window[1]]}

    @classmethod
    def from_json(cls, obj: dict) -> "SineFamilyParams":
        return cls(int(obj["n_arcs"]), float(obj["amplitude"]),
                   (obj["window"][0], obj["window"][1]))


@dataclass(frozen=True)
class LiftedArcId:
    k: int
    n: int = 0

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("arc index k must be non-negative")


@dataclass(frozen=True)
class Root:
    """One solution of the crossing equation; tangent means a double root."""

    x: float
    tangent: bool = False
    delta: int = field(default=0, compare=False)


def _phase(params: SineFamilyParams, k: int) -> float:
    return 2.0 * math.pi * k / params.n_arcs


def lifted_point(params: SineFamilyParams, arc_id: LiftedArcId, x: float) -> Point2:
    """Point of the lifted arc (k, n) at lift coordinate x."""
    if arc_id.k >= params.n_arcs:
        raise ValueError(f"k={arc_id.k} out of range for N={params.n_arcs}")
    y = params.amplitude * math.sin(x - _phase(params, arc_id.k)) + math.pi * arc_id.n
    return Point2(x, y)


def translate_check(params: SineFamilyParams, arc_id: LiftedArcId, x: float,
                    tol: float = 1e-12) -> bool:
    """Does translating by 2 pi / N move arc k onto arc k+1 (wrapping to 0)?"""
    step = 2.0 * math.pi / params.n_arcs
    p = lifted_point(params, arc_id, x)
    k_next = (arc_id.k + 1) % params.n_arcs
    q = lifted_point(params, LiftedArcId(k_next, arc_id.n), x + step)
    return abs((p.x + step) - q.x) <= tol and abs(p.y - q.y) <= tol


def project(p: Point2) -> Point2:
    """exp of x + iy as a plane point."""
    r = math.exp(p.x)
    return Point2(r * math.cos(p.y), r * math.sin(p.y))


def sample_gamma(params: SineFamilyParams, k: int, step: float,
                 budget: int = VERTEX_BUDGET) -> Polyline:
    """Projected arc gamma_k, adaptively sampled so image steps stay <= step.

    The origin (the limit of the left tail) is prepended as the first
    vertex. Sampling is adaptive in the image metric: uniform lift steps
    would waste the budget on the slow left end and under-resolve the
    exponentially stretched right end.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if not 0 <= k < params.n_arcs:
        raise ValueError(f"k={k} out of range")
    a = params.amplitude
    lo, hi = params.window
    speed_cap = math.sqrt(1.0 + a * a)

    xs = [lo]
    x = lo
    while x < hi:
        dx = min(0.05, 0.9 * step / (speed_cap * math.exp(x)))
        x = min(hi, x + dx)
        xs.append(x)
        if len(xs) > budget:
            raise WindowTooCoarse(
                f"step {step} over window {params.window} exceeds "
                f"{budget} vertices")

    phase = _phase(params, k)
    xs_arr = np.array(xs)
    ys = a * np.sin(xs_arr - phase)
    radii = np.exp(xs_arr)
    pts = np.column_stack([radii * np.cos(ys), radii * np.sin(ys)])

    keep = [np.array([0.0, 0.0])]
    for p in pts:
        d = p - keep[-1]
        if math.hypot(d[0], d[1]) > SPACING_FLOOR:
            keep.append(p)
    return Polyline(np.array(keep))


def family_arcs(params: SineFamilyParams, step: float = FAMILY_STEP,
                budget: int = VERTEX_BUDGET, perturb=None):
    """The 2N projected arcs [g_0, -g_0, g_1, -g_1, ...] on one shared x-grid.

    Returns (arcs, groups, parities). Arc 2k is gamma_k and arc 2k+1 its
    mirror -gamma_k (the odd lifted branch n=1). Sharing the grid puts
    every vertex of every arc at the same radii, which is what makes
    sampled crossing detection faithful to sign changes of the lifted
    ordinate differences.

    `perturb(k, parity, xs) -> dy` adds a smooth ordinate field to the
    lifted branch before projecting; classification is stable under such
    fields as long as they stay well under the threshold gap.
    """
    if params.amplitude == 0.0:
        raise DegenerateAmplitude("amplitude 0 collapses the family to rays")
    n = params.n_arcs
    lo, hi = params.window
    # Left of x_cut the image spacing would fall under the resolvable floor.
    x_cut = math.log(SPACING_FLOOR / step)
    lo = max(lo, x_cut)
    if lo >= hi:
        raise ValueError(f"window {params.window} is entirely sub-resolution")
    segs = max(1, math.ceil((hi - lo) / step))
    if (segs + 2) * 2 * n > budget:
        raise WindowTooCoarse(f"family sampling would exceed {budget} vertices")
    xs = np.linspace(lo, hi, segs + 1)
    radii = np.exp(xs)

    arcs = []
    groups = []
    parities = []
    a = params.amplitude
    for k in range(n):
        for parity in (0, 1):
            ys = a * np.sin(xs - _phase(params, k)) + math.pi * parity
            if perturb is not None:
                ys = ys + np.asarray(perturb(k, parity, xs), dtype=np.float64)
            pts = np.column_stack([radii * np.cos(ys), radii * np.sin(ys)])
            pts = np.vstack([[0.0, 0.0], pts])
            arcs.append(Polyline(pts))
            groups.append(k)
            parities.append(parity)
    return arcs, groups, parities


def solve_lift_intersections(params: SineFamilyParams, k: int, l: int,
                             delta: int, window: Optional[tuple] = None) -> list[Root]:
    """All crossing parameters of lifted arcs k and l at branch gap delta.

    The difference of sines collapses to
    2 a sin(pi (l - k) / N) cos(x - pi (k + l) / N) = pi delta, so roots
    are pi (k + l) / N +- arccos(u) + 2 pi j. Amplitude bands with |u| > 1
    have no crossings; |u| = 1 gives tangencies, reported once with the
    tangent flag set.
    """
    if k == l:
        raise IdenticalArcs("k and l name the same arc")
    n = params.n_arcs
    s = math.sin(math.pi * (l - k) / n)
    if abs(s) < 1e-15:
        if delta == 0:
            raise IdenticalArcs(f"arcs {k} and {l} coincide modulo {n}")
        return []
    lo, hi = window if window is not None else params.window
    c = 2.0 * params.amplitude * s
    u = math.pi * delta / c
    if abs(u) > 1.0 + 1e-12:
        return []
    center = math.pi * (k + l) / n

    tangent = abs(abs(u) - 1.0) <= 1e-12
    if tangent:
        base = center if u > 0 else center + math.pi
        offsets = [0.0]
    else:
        alpha = math.acos(u)
        base = center
        offsets = [-alpha, alpha]

    roots = []
    j0 = math.floor((lo - base - max(offsets)) / (2.0 * math.pi)) - 1
    j1 = math.ceil((hi - base - min(offsets)) / (2.0 * math.pi)) + 1
    for j in range(int(j0), int(j1) + 1):
        for off in offsets:
            x = base + off + 2.0 * math.pi * j
            if lo <= x <= hi:
                roots.append(Root(x=x, tangent=tangent, delta=delta))
    roots.sort(key=lambda r: r.x)
    return roots


def plaiting_threshold(n: int) -> float:
    """Critical amplitude a*(N): plaited strictly below, nested at or above."""
    if n < 2:
        raise ValueError("need N >= 2")
    if n % 2 == 0:
        return math.pi / 2.0
    return math.pi / (2.0 * math.sin(math.pi * (n - 1) / (2.0 * n)))


def classify_analytic(params: SineFamilyParams) -> Verdict:
    """Amplitude dichotomy: |a| below the threshold is plaited, else nested."""
    if params.amplitude == 0.0:
        raise DegenerateAmplitude("classification needs a != 0")
    if abs(params.amplitude) < plaiting_threshold(params.n_arcs):
        return Verdict.PLAITED
    return Verdict.NESTED


def crossing_deltas(params: SineFamilyParams, arcs_k: int, arcs_l: int,
                    parity_k: int = 0, parity_l: int = 0,
                    delta_max: int = DELTA_MAX) -> list[int]:
    """Branch gaps delta with crossings in the window between two arcs.

    Parity selects the plain (n = 0) or mirrored (n = 1) copy; gaps between
    opposite parities are odd, between equal parities even.
    """
    if arcs_k == arcs_l:
        # Same sine graph: vertical translates never meet it again.
        return []
    out = []
    for delta in range(-delta_max, delta_max + 1):
        if (delta - (parity_l - parity_k)) % 2 != 0:
            continue
        if solve_lift_intersections(params, arcs_k, arcs_l, delta):
            out.append(delta)
    return out
