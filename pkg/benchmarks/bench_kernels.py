"""Compiled crossing kernels against the pure numpy fallback.

Times both backends on the workloads the package actually runs: sampled
sine arcs crossing each other, stage curves checked for simplicity, and
stage curves intersected with the base chord.  Both backends must return
identical rows before a workload is timed.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import argparse
import math
import time

import numpy as np

from plaitnest import SineFamilyParams, builtin_system
from plaitnest.geometry import _kernels_py
from plaitnest.geometry.kernels import _canonical
from plaitnest.geometry.primitives import INTERSECT_TOL
from plaitnest.sinefamily import FAMILY_STEP, sample_gamma

try:
    from plaitnest.geometry import _kernels
except ImportError:
    _kernels = None


def workloads():
    params = SineFamilyParams(3, 3.0, (-6.0 * math.pi, math.pi))
    a0 = sample_gamma(params, 0, FAMILY_STEP).vertices
    a1 = sample_gamma(params, 1, FAMILY_STEP).vertices

    system = builtin_system("nesting")
    base = system.base.vertices
    s5 = system.stage(5).curve.vertices
    s6 = system.stage(6).curve.vertices

    return [
        ("arc pair cross", "polyline_crossings", (a0, a1, INTERSECT_TOL)),
        ("stage-6 vs base", "polyline_crossings", (s6, base, INTERSECT_TOL)),
        ("stage-5 simple", "self_crossings", (s5, INTERSECT_TOL)),
        ("stage-6 simple", "self_crossings", (s6, INTERSECT_TOL)),
    ]


def best_time(module, fn, args, repeats):
    call = getattr(module, fn)
    call(*args)  # warm up
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        call(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed runs per workload (best is kept)")
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not available; nothing to compare")
        return 1

    rows = []
    for label, fn, call_args in workloads():
        got_c = _canonical(getattr(_kernels, fn)(*call_args))
        got_p = _canonical(getattr(_kernels_py, fn)(*call_args))
        if not np.array_equal(got_c, got_p):
            print(f"{label}: backends disagree, not timing")
            return 1
        tc = best_time(_kernels, fn, call_args, args.repeats)
        tp = best_time(_kernels_py, fn, call_args, args.repeats)
        n = max(len(call_args[0]), len(call_args[1])
                if fn == "polyline_crossings" else 0)
        rows.append((label, n, tp * 1e3, tc * 1e3, tp / tc))

    print(f"{'workload':<16} {'verts':>6} {'pure ms':>9} "
          f"{'compiled ms':>12} {'speedup':>8}")
    for label, n, tp, tc, ratio in rows:
        print(f"{label:<16} {n:>6} {tp:>9.2f} {tc:>12.3f} {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
