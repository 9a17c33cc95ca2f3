"""Backend selection for the crossing kernels.

The compiled extension is preferred when it imported cleanly; setting
PLAITNEST_FORCE_PURE=1 pins the numpy fallback (used by the benchmark and
by the backend-agreement tests). Both backends return identical arrays.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_impl = _kernels_py
USING_COMPILED = False

if os.environ.get("PLAITNEST_FORCE_PURE", "") != "1":
    try:
        from . import _kernels as _impl_c

        _impl = _impl_c
        USING_COMPILED = True
    except ImportError:
        pass


def _canonical(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] <= 1:
        return rows
    order = np.lexsort((rows[:, 3], rows[:, 1], rows[:, 2], rows[:, 0]))
    return rows[order]


def polyline_crossings(p: np.ndarray, q: np.ndarray, tol: float) -> np.ndarray:
    """Raw crossing rows [i, j, s, t, x, y, kind] between two vertex arrays."""
    p = np.ascontiguousarray(p, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.float64)
    return _canonical(_impl.polyline_crossings(p, q, tol))


def self_crossings(p: np.ndarray, tol: float) -> np.ndarray:
    """Raw crossing rows of a vertex array against itself (j >= i + 2)."""
    p = np.ascontiguousarray(p, dtype=np.float64)
    return _canonical(_impl.self_crossings(p, tol))
