"""Pure-numpy crossing kernel.

Same contract and the same arithmetic, operation for operation, as the
compiled kernel in ``_kernels.pyx``; the two must agree bit-for-bit so the
backend choice never changes results. Candidate pairs are pruned with an
x-interval sort before the exact predicate runs.

Output rows are [i, j, s, t, x, y, kind] with kind 0 = crossing (endpoint
contacts included) and kind 2 = collinear overlap (reported, raised by the
caller).
"""

from __future__ import annotations

import numpy as np

_PARALLEL_EPS = 1e-14


def _segment_frames(v: np.ndarray):
    a = v[:-1]
    b = v[1:]
    d = b - a
    lengths = np.hypot(d[:, 0], d[:, 1])
    xlo = np.minimum(a[:, 0], b[:, 0])
    xhi = np.maximum(a[:, 0], b[:, 0])
    return a, d, lengths, xlo, xhi


def _pair_rows(i, a1, d1, l1, qa, qd, ql, js, tol):
    """Exact predicate for one p-segment against candidate q-segments."""
    rx = qa[:, 0] - a1[0]
    ry = qa[:, 1] - a1[1]
    d2x = qd[:, 0]
    d2y = qd[:, 1]
    denom = d1[0] * d2y - d1[1] * d2x
    cr1 = rx * d1[1] - ry * d1[0]
    cr2 = rx * d2y - ry * d2x
    par = np.abs(denom) <= _PARALLEL_EPS * l1 * ql

    rows = []
    ok = ~par
    if np.any(ok):
        s = np.where(ok, cr2 / np.where(ok, denom, 1.0), 0.0)
        t = np.where(ok, cr1 / np.where(ok, denom, 1.0), 0.0)
        hit = (ok
               & (s >= -tol / l1) & (s <= 1.0 + tol / l1)
               & (t >= -tol / ql) & (t <= 1.0 + tol / ql))
        for m in np.flatnonzero(hit):
            sv = min(1.0, max(0.0, s[m]))
            tv = min(1.0, max(0.0, t[m]))
            rows.append((float(i), float(js[m]), sv, tv,
                         a1[0] + sv * d1[0], a1[1] + sv * d1[1], 0.0))
    col = par & (np.abs(cr1) <= tol * l1)
    for m in np.flatnonzero(col):
        t0 = (rx[m] * d1[0] + ry[m] * d1[1]) / (l1 * l1)
        t1 = ((rx[m] + d2x[m]) * d1[0] + (ry[m] + d2y[m]) * d1[1]) / (l1 * l1)
        lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
        ov0, ov1 = max(0.0, lo), min(1.0, hi)
        ext = (ov1 - ov0) * l1
        if ext > tol:
            rows.append((float(i), float(js[m]), 0.0, 0.0, 0.0, 0.0, 2.0))
        elif ext >= -tol:
            sv = min(1.0, max(0.0, 0.5 * (ov0 + ov1)))
            px = a1[0] + sv * d1[0]
            py = a1[1] + sv * d1[1]
            tv = ((px - qa[m, 0]) * d2x[m] + (py - qa[m, 1]) * d2y[m]) / (ql[m] * ql[m])
            rows.append((float(i), float(js[m]), sv, min(1.0, max(0.0, tv)),
                         px, py, 0.0))
    return rows


def polyline_crossings(p: np.ndarray, q: np.ndarray, tol: float) -> np.ndarray:
    pa, pd, pl, pxlo, pxhi = _segment_frames(p)
    qa, qd, ql, qxlo, qxhi = _segment_frames(q)

    order = np.argsort(qxlo, kind="stable")
    qxlo_s = qxlo[order]
    qxhi_s = qxhi[order]

    rows = []
    for i in range(pa.shape[0]):
        hi = np.searchsorted(qxlo_s, pxhi[i] + tol, side="right")
        if hi == 0:
            continue
        cand = order[:hi][qxhi_s[:hi] >= pxlo[i] - tol]
        if cand.size == 0:
            continue
        cand = np.sort(cand)
        rows.extend(_pair_rows(i, pa[i], pd[i], pl[i],
                               qa[cand], qd[cand], ql[cand], cand, tol))
    if not rows:
        return np.empty((0, 7))
    return np.array(rows)


def self_crossings(p: np.ndarray, tol: float) -> np.ndarray:
    pa, pd, pl, pxlo, pxhi = _segment_frames(p)

    order = np.argsort(pxlo, kind="stable")
    pxlo_s = pxlo[order]
    pxhi_s = pxhi[order]

    rows = []
    for i in range(pa.shape[0]):
        hi = np.searchsorted(pxlo_s, pxhi[i] + tol, side="right")
        if hi == 0:
            continue
        cand = order[:hi][pxhi_s[:hi] >= pxlo[i] - tol]
        cand = cand[cand >= i + 2]
        if cand.size == 0:
            continue
        cand = np.sort(cand)
        rows.extend(_pair_rows(i, pa[i], pd[i], pl[i],
                               pa[cand], pd[cand], pl[cand], cand, tol))
    if not rows:
        return np.empty((0, 7))
    return np.array(rows)
