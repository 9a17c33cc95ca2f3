"""Independent reference implementations the tests compare against.

Everything here is deliberately written from the raw definitions, not by
calling into the package: crossings come from a dense sign scan of the
lifted ordinate difference plus bisection, enclosure from a grid flood
fill, winding from summed angle increments.  Slow and simple on purpose.
"""

from __future__ import annotations

import math

import numpy as np

SCAN_STEP = 1e-3
FINE_STEP = 1e-6
BISECT_ITERS = 64


def lift_ordinate(a: float, n: int, k: int, x):
    """Ordinate of the k-th lifted graph at x (branch 0)."""
    return a * np.sin(x - 2.0 * math.pi * k / n)


def crossing_residual(a: float, n: int, k: int, l: int, delta: int, x):
    """Difference of lifted ordinates minus the branch gap pi*delta."""
    return (lift_ordinate(a, n, k, x) - lift_ordinate(a, n, l, x)
            - math.pi * delta)


def _bisect(f, lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if flo * f(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)


def scan_crossings(a: float, n: int, k: int, l: int, delta: int,
                   window: tuple[float, float]) -> list[float]:
    """All roots of the crossing residual in the closed window.

    Dense sign scan at SCAN_STEP, a finer re-scan around grid minima of
    the residual magnitude (to catch root pairs narrower than the grid),
    then bisection on each bracket.  Positions are good to ~1e-10.
    """
    lo, hi = window
    f = lambda x: crossing_residual(a, n, k, l, delta, x)
    xs = np.arange(lo, hi + SCAN_STEP, SCAN_STEP)
    xs[-1] = hi
    vals = crossing_residual(a, n, k, l, delta, xs)

    roots = []
    sign = np.sign(vals)
    flips = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    for i in flips:
        roots.append(_bisect(f, float(xs[i]), float(xs[i + 1])))

    # A near-tangent root pair can hide inside one grid cell; re-scan
    # finely around interior magnitude minima that dip close to zero.
    mags = np.abs(vals)
    dip = 2.0 * max(abs(a), 1.0) * SCAN_STEP ** 2 + 1e-12
    mid = mags[1:-1]
    candidates = np.flatnonzero(
        (mid < dip) & (mid <= mags[:-2]) & (mid <= mags[2:])) + 1
    for i in candidates:
        fx = np.arange(xs[i - 1], xs[i + 1] + FINE_STEP, FINE_STEP)
        fv = crossing_residual(a, n, k, l, delta, fx)
        fs = np.sign(fv)
        for j in np.flatnonzero(fs[:-1] * fs[1:] < 0):
            roots.append(_bisect(f, float(fx[j]), float(fx[j + 1])))

    # The window is closed; an exact-endpoint root has no sign change.
    for x_end in (lo, hi):
        if abs(f(x_end)) < 1e-9 * max(abs(a), 1.0):
            roots.append(x_end)

    roots.sort()
    out = []
    for r in roots:
        if not out or r - out[-1] > 1e-8:
            out.append(r)
    return out


def scan_offsets(a: float, n: int, k: int, l: int,
                 window: tuple[float, float], delta_max: int = 3) -> set[int]:
    """Branch gaps with at least one crossing in the window."""
    return {d for d in range(-delta_max, delta_max + 1)
            if scan_crossings(a, n, k, l, d, window)}


def winding_angle_sum(loop: np.ndarray, px: float, py: float) -> int:
    """Winding number by summing signed angle increments around (px, py)."""
    v = np.asarray(loop, dtype=np.float64)
    if np.hypot(*(v[0] - v[-1])) > 1e-12:
        v = np.vstack([v, v[0]])
    ang = np.arctan2(v[:, 1] - py, v[:, 0] - px)
    steps = np.diff(ang)
    steps = (steps + math.pi) % (2.0 * math.pi) - math.pi
    total = steps.sum() / (2.0 * math.pi)
    rounded = round(float(total))
    if abs(total - rounded) > 1e-6:
        raise ValueError(f"angle sum {total} is not near an integer")
    return int(rounded)


def flood_enclosed(segments, px: float, py: float, cells: int = 512) -> bool:
    """Is (px, py) walled in by the segments?  Grid flood fill.

    The bounding box (plus margin) is rasterized; cells crossed by any
    segment become walls; the answer is whether a 4-connected walk from
    the query point's cell can reach the border.  Feature sizes must be
    comfortably above the cell size, which the callers arrange.
    """
    segs = [np.asarray(s, dtype=np.float64) for s in segments]
    allp = np.vstack(segs + [np.array([[px, py]])])
    x0, y0 = allp.min(axis=0) - 0.05
    x1, y1 = allp.max(axis=0) + 0.05
    span = max(x1 - x0, y1 - y0)
    h = span / cells

    wall = np.zeros((cells + 1, cells + 1), dtype=bool)
    for seg in segs:
        for a, b in zip(seg[:-1], seg[1:]):
            length = math.hypot(b[0] - a[0], b[1] - a[1])
            m = max(2, int(length / (0.25 * h)) + 1)
            ts = np.linspace(0.0, 1.0, m)
            gx = ((a[0] + ts * (b[0] - a[0])) - x0) / h
            gy = ((a[1] + ts * (b[1] - a[1])) - y0) / h
            ix = np.clip(gx.astype(int), 0, cells)
            iy = np.clip(gy.astype(int), 0, cells)
            wall[ix, iy] = True

    sx = min(cells, max(0, int((px - x0) / h)))
    sy = min(cells, max(0, int((py - y0) / h)))
    if wall[sx, sy]:
        raise ValueError("query point rasterizes onto a wall")

    seen = np.zeros_like(wall)
    stack = [(sx, sy)]
    seen[sx, sy] = True
    while stack:
        cx, cy = stack.pop()
        if cx == 0 or cy == 0 or cx == cells or cy == cells:
            return False
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nx, ny = cx + dx, cy + dy
            if not seen[nx, ny] and not wall[nx, ny]:
                seen[nx, ny] = True
                stack.append((nx, ny))
    return True
