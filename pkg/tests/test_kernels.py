"""The compiled and pure-numpy crossing kernels must agree bitwise."""

import numpy as np
import pytest

from plaitnest.geometry import USING_COMPILED, kernels
from plaitnest.geometry import _kernels_py

_kernels_c = pytest.importorskip(
    "plaitnest.geometry._kernels",
    reason="compiled kernel extension not built")

TOL = 1e-9


def _assert_rows_equal(a, b, label):
    a = kernels._canonical(np.asarray(a, dtype=np.float64))
    b = kernels._canonical(np.asarray(b, dtype=np.float64))
    assert a.shape == b.shape, f"{label}: {a.shape} vs {b.shape}"
    assert np.array_equal(a, b), f"{label}: rows differ"


def _random_polyline(rng, m):
    pts = rng.uniform(-2.0, 2.0, (m, 2))
    keep = [pts[0]]
    for p in pts[1:]:
        if np.hypot(*(p - keep[-1])) > 1e-6:
            keep.append(p)
    if len(keep) < 2:
        keep.append(keep[-1] + [1.0, 0.0])
    return np.array(keep)


class TestBackendParity:
    def test_flag_reports_compiled(self):
        assert USING_COMPILED is True

    def test_random_pairs(self):
        rng = np.random.default_rng(101)
        for trial in range(300):
            p = _random_polyline(rng, int(rng.integers(2, 12)))
            q = _random_polyline(rng, int(rng.integers(2, 12)))
            _assert_rows_equal(_kernels_py.polyline_crossings(p, q, TOL),
                               _kernels_c.polyline_crossings(p, q, TOL),
                               f"pair trial {trial}")

    def test_random_self(self):
        rng = np.random.default_rng(202)
        for trial in range(300):
            p = _random_polyline(rng, int(rng.integers(4, 16)))
            _assert_rows_equal(_kernels_py.self_crossings(p, TOL),
                               _kernels_c.self_crossings(p, TOL),
                               f"self trial {trial}")

    def test_touch_and_parallel_layouts(self):
        p = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
        layouts = [
            np.array([[1.0, 0.0], [2.0, 0.0]]),          # endpoint touch
            np.array([[0.5, -1.0], [0.5, 1.0]]),         # plain cross
            np.array([[0.0, 0.5], [1.0, 0.5]]),          # parallel offset
            np.array([[0.25, 0.0], [0.25, 1.0]]),        # T junction
            np.array([[0.5, 0.0], [1.5, 1.0]]),          # vertex on segment
            np.array([[-1.0, -1.0], [-0.5, -0.5]]),      # disjoint
        ]
        for i, q in enumerate(layouts):
            _assert_rows_equal(_kernels_py.polyline_crossings(p, q, TOL),
                               _kernels_c.polyline_crossings(p, q, TOL),
                               f"layout {i}")

    def test_overlap_rows_match(self):
        p = np.array([[0.0, 0.0], [2.0, 0.0]])
        q = np.array([[1.0, 0.0], [3.0, 0.0]])
        rows_py = _kernels_py.polyline_crossings(p, q, TOL)
        rows_c = _kernels_c.polyline_crossings(p, q, TOL)
        _assert_rows_equal(rows_py, rows_c, "overlap")
        assert (np.asarray(rows_py)[:, 6] == 2.0).any()

    def test_dense_curve_pair(self):
        t = np.linspace(0.0, 6.0, 400)
        p = np.column_stack([t, np.sin(3.0 * t)])
        q = np.column_stack([t, np.cos(2.0 * t + 0.3)])
        _assert_rows_equal(_kernels_py.polyline_crossings(p, q, TOL),
                           _kernels_c.polyline_crossings(p, q, TOL),
                           "dense")

    def test_force_pure_env_honored(self):
        import subprocess
        import sys
        out = subprocess.run(
            [sys.executable, "-c",
             "from plaitnest.geometry import USING_COMPILED; "
             "print(USING_COMPILED)"],
            env={"PLAITNEST_FORCE_PURE": "1", "PATH": "/usr/bin:/bin"},
            capture_output=True, text=True)
        assert out.stdout.strip() == "False"
