"""Deterministic SVG emission for curve families and stage figures.

Every scene renders to identical bytes for identical input: fixed header,
fixed number formatting (6 decimals), no timestamps. Curves map to one
root group each holding a single path element; a curve clipped into
several visible runs keeps one path with several M subpaths, so path
count always equals drawn-curve count.

Vertices closer to the plane origin than 1e-4 of the viewport diameter
are dropped: projected arc families spiral into 0 with sub-pixel detail
that only bloats the output.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyScene
from .geometry.primitives import Polyline, clip_away_ball
from .sinefamily import (FAMILY_STEP, LiftedArcId, SineFamilyParams,
                         lifted_point, sample_gamma)
from .substitution import builtin_system

BLACK = "#000000"
RED = "#CC0000"
BLUE = "#0000CC"
CLIP_FRACTION = 1e-4

_COLOR_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")


@dataclass
class SceneSpec:
    """Curves with style, outlined boxes, and a model-space viewport.

    viewport is (x0, y0, width, height) in model units; scale converts
    model units to pixels.
    """

    curves: list  # (Polyline, color, stroke width)
    boxes: list = field(default_factory=list)  # (x0, y0, width, height)
    viewport: tuple = (0.0, 0.0, 1.0, 1.0)
    scale: float = 100.0

    def __post_init__(self) -> None:
        vx0, vy0, vw, vh = (float(v) for v in self.viewport)
        if not (vw > 0.0 and vh > 0.0):
            raise ValueError("degenerate viewport")
        if not self.scale > 0.0:
            raise ValueError("scale must be positive")
        self.viewport = (vx0, vy0, vw, vh)
        for curve, color, width in self.curves:
            if not isinstance(curve, Polyline):
                raise TypeError("scene curves must be Polyline instances")
            if not _COLOR_RE.match(color):
                raise ValueError(f"bad color {color!r}")
            if not float(width) > 0.0:
                raise ValueError("stroke width must be positive")


def _fmt(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def render_svg(scene: SceneSpec) -> bytes:
    vx0, vy0, vw, vh = scene.viewport
    sc = scene.scale
    r_clip = CLIP_FRACTION * math.hypot(vw, vh)

    def tx(x: float) -> str:
        return _fmt((x - vx0) * sc)

    def ty(y: float) -> str:
        return _fmt((vy0 + vh - y) * sc)

    groups = []
    for curve, color, width in scene.curves:
        runs = clip_away_ball(curve.vertices, 0.0, 0.0, r_clip)
        if not runs:
            continue
        parts = []
        for run in runs:
            coords = [f"{tx(p[0])},{ty(p[1])}" for p in run.vertices]
            parts.append("M " + " L ".join(coords))
        groups.append(
            f'<g stroke="{color}" stroke-width="{_fmt(float(width))}" '
            f'fill="none">\n<path d="{" ".join(parts)}"/>\n</g>')
    if not groups:
        raise EmptyScene("no drawable curve content in the viewport")

    rects = []
    for bx0, by0, bw, bh in scene.boxes:
        rects.append(f'<rect x="{tx(bx0)}" y="{ty(by0 + bh)}" '
                     f'width="{_fmt(bw * sc)}" height="{_fmt(bh * sc)}"/>')
    if rects:
        groups.append(f'<g stroke="{BLUE}" stroke-width="0.600000" '
                      'fill="none">\n' + "\n".join(rects) + "\n</g>")

    w, h = _fmt(vw * sc), _fmt(vh * sc)
    body = "\n".join(groups)
    doc = ('<?xml version="1.0" encoding="UTF-8"?>\n'
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
           f'{body}\n</svg>\n')
    return doc.encode("utf-8")


_PATH_RE = re.compile(r'<g stroke="(#[0-9A-Fa-f]{6})"[^>]*>\s*<path d="([^"]+)"/>')


def parse_svg_paths(data: bytes, viewport=None, scale=None):
    """Curves back out of an emitted document, as (color, [Polyline]) per
    path element with one entry per M subpath.

    Coordinates come back in pixels; passing the scene's viewport and
    scale maps them back to model space.
    """
    text = data.decode("utf-8")
    out = []
    for color, d in _PATH_RE.findall(text):
        polys = []
        for sub in d.split("M "):
            sub = sub.strip()
            if not sub:
                continue
            pts = []
            for pair in sub.replace("L ", "").split():
                xs, ys = pair.split(",")
                x, y = float(xs), float(ys)
                if viewport is not None and scale is not None:
                    vx0, vy0, vw, vh = viewport
                    x = x / scale + vx0
                    y = vy0 + vh - y / scale
                pts.append((x, y))
            if len(pts) >= 2:
                polys.append(Polyline(pts))
        out.append((color, polys))
    return out


# -- figure builders -----------------------------------------------------

FAMILY_COLORS = (BLACK, RED, BLUE)


def figure_lifts(a: float = 1.0, window=(-2.0 * math.pi, 2.0 * math.pi),
                 step: float = 0.02) -> SceneSpec:
    """The three lifted graphs for the N = 3 family."""
    params = SineFamilyParams(3, a)
    xs = np.arange(window[0], window[1] + step, step)
    curves = []
    for k in range(3):
        ys = np.array([lifted_point(params, LiftedArcId(k, 0), x).y for x in xs])
        curves.append((Polyline(np.column_stack([xs, ys])),
                       FAMILY_COLORS[k], 1.0))
    lo = min(c[0].vertices[:, 1].min() for c in curves) - 0.5
    hi = max(c[0].vertices[:, 1].max() for c in curves) + 0.5
    return SceneSpec(curves, viewport=(window[0] - 0.5, lo,
                                       window[1] - window[0] + 1.0, hi - lo),
                     scale=40.0)


def figure_family(a: float, window=(-6.0 * math.pi, math.pi)) -> SceneSpec:
    """The projected N = 3 family; small a plaits, large a nests."""
    params = SineFamilyParams(3, a, window)
    curves = []
    for k in range(3):
        arc = sample_gamma(params, k, FAMILY_STEP)
        curves.append((arc, FAMILY_COLORS[k], 1.0))
    lim = math.exp(abs(a) + 0.3)
    return SceneSpec(curves, viewport=(-lim, -lim, 2 * lim, 2 * lim),
                     scale=max(40.0, 400.0 / lim))


def stage_scene(system, n: int) -> SceneSpec:
    """Black base, red stage curve, outlined changed cells."""
    sc = system.stage(n)
    boxes = []
    for quad in sc.changed_regions:
        x0, x1 = float(quad[:, 0].min()), float(quad[:, 0].max())
        y0, y1 = float(quad[:, 1].min()), float(quad[:, 1].max())
        boxes.append((x0, y0, x1 - x0, y1 - y0))
    x0, x1, y0, y1 = system.domain
    m = 0.05 * (x1 - x0)
    return SceneSpec([(system.base, BLACK, 1.2), (sc.curve, RED, 1.0)],
                     boxes=boxes,
                     viewport=(x0 - m, y0 - m, x1 - x0 + 2 * m, y1 - y0 + 2 * m),
                     scale=400.0)


def figure_stage(n: int, variant: str = "nesting") -> SceneSpec:
    return stage_scene(builtin_system(variant), n)


FIGURES = {
    "lifts": lambda: figure_lifts(),
    "family-small": lambda: figure_family(1.0),
    "family-large": lambda: figure_family(3.0),
    "stage-1": lambda: figure_stage(1),
    "stage-2": lambda: figure_stage(2),
    "stage-3": lambda: figure_stage(3),
    "stage-4": lambda: figure_stage(4),
}
