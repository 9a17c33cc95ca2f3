"""Runnable property suites for the sine family, the classifier, and the
substitution systems.

Each suite is a list of named properties; running one produces a report
with per-property timing and, on failure, the counterexample inputs.
Everything is driven by one seed so runs are reproducible, and the same
seed gives the same per-suite results whether a suite runs alone or as
part of `all`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .classifier import (classify_enclosure, classify_lift, lift_report,
                         ArcFamily)
from .geometry.primitives import Point2, self_intersections
from .sinefamily import (LiftedArcId, SineFamilyParams, classify_analytic,
                         family_arcs, lifted_point, plaiting_threshold,
                         project, solve_lift_intersections, translate_check)
from .substitution import SubstitutionSystem, builtin_system
from .verdict import Verdict

DEFAULT_SEED = 1729
_SUITE_IDS = {"sine": 1, "classifier": 2, "ifs": 3}


@dataclass
class PropertyResult:
    name: str
    passed: bool
    seconds: float
    detail: str = ""
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed,
               "seconds": round(self.seconds, 6), "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteReport:
    suite: str
    seed: int
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
                "properties": [r.to_json() for r in self.results]}


class _Fail(Exception):
    def __init__(self, detail: str, counterexample: Optional[dict] = None):
        super().__init__(detail)
        self.detail = detail
        self.counterexample = counterexample


def _run(name: str, fn: Callable[[], str]) -> PropertyResult:
    t0 = time.perf_counter()
    try:
        detail = fn() or ""
        return PropertyResult(name, True, time.perf_counter() - t0, detail)
    except _Fail as f:
        return PropertyResult(name, False, time.perf_counter() - t0,
                              f.detail, f.counterexample)
    except Exception as e:  # a crash is a failure with the error as evidence
        return PropertyResult(name, False, time.perf_counter() - t0,
                              f"{type(e).__name__}: {e}")


# -- sine suite ----------------------------------------------------------

def _sine_props(rng: np.random.Generator):
    def threshold_branches() -> str:
        for n in range(2, 9):
            want = (math.pi / 2.0 if n % 2 == 0
                    else math.pi / (2.0 * math.sin(math.pi * (n - 1) / (2 * n))))
            got = plaiting_threshold(n)
            if abs(got - want) > 1e-12:
                raise _Fail(f"threshold branch wrong at N={n}",
                            {"n": n, "got": got, "want": want})
        return "N in 2..8, both parity branches"

    def translate_covariance() -> str:
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            params = SineFamilyParams(n, float(rng.uniform(0.2, 4.0)))
            arc = LiftedArcId(int(rng.integers(0, n)), int(rng.integers(0, 2)))
            x = float(rng.uniform(-30, 30))
            if not translate_check(params, arc, x):
                raise _Fail("translate covariance broken",
                            {"n": n, "a": params.amplitude, "k": arc.k,
                             "parity": arc.n, "x": x})
        return "1000 random samples, tol 1e-12"

    def scaling_covariance() -> str:
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            params = SineFamilyParams(n, float(rng.uniform(0.2, 4.0)))
            k = int(rng.integers(0, n))
            x = float(rng.uniform(-10, 3))
            step = 2.0 * math.pi / n
            p = project(lifted_point(params, LiftedArcId(k, 0), x))
            q = project(lifted_point(params, LiftedArcId((k + 1) % n, 0), x + step))
            lam = math.exp(step)
            err = math.hypot(lam * p.x - q.x, lam * p.y - q.y)
            if err > 1e-12 * max(1.0, lam * math.exp(x)):
                raise _Fail("scaling covariance broken",
                            {"n": n, "a": params.amplitude, "k": k, "x": x,
                             "err": err})
        return "1000 random samples, relative tol 1e-12"

    def root_cadence() -> str:
        for _ in range(10):
            n = int(rng.integers(2, 9))
            params = SineFamilyParams(n, float(rng.uniform(0.3, 3.0)))
            k, l = rng.choice(n, size=2, replace=False)
            roots = solve_lift_intersections(params, int(k), int(l), 0,
                                             window=(-200.0, 200.0))
            xs = np.array([r.x for r in roots])
            for _ in range(20):
                lo = float(rng.uniform(-150, 100))
                if np.any(np.abs(xs - lo) < 1e-6) or \
                   np.any(np.abs(xs - (lo + 2 * math.pi)) < 1e-6):
                    continue
                cnt = int(np.count_nonzero((xs >= lo) & (xs <= lo + 2 * math.pi)))
                if cnt != 2:
                    raise _Fail("delta=0 window does not hold 2 roots",
                                {"n": n, "a": params.amplitude, "k": int(k),
                                 "l": int(l), "window": [lo, lo + 2 * math.pi],
                                 "count": cnt})
        return "10 configurations x 20 random closed 2 pi windows"

    def scan_agreement() -> str:
        for _ in range(10):
            n = int(rng.integers(2, 9))
            a = float(rng.uniform(0.3, 3.5))
            k, l = (int(v) for v in rng.choice(n, size=2, replace=False))
            if abs(math.sin(math.pi * (l - k) / n)) < 1e-9:
                continue
            delta = int(rng.integers(-2, 3))
            params = SineFamilyParams(n, a)
            lo, hi = -10.0, 10.0
            roots = [r for r in solve_lift_intersections(params, k, l, delta,
                                                         window=(lo, hi))
                     if not r.tangent]
            amp = 2.0 * a * math.sin(math.pi * (l - k) / n)
            cen = math.pi * (k + l) / n

            def f(x):
                return amp * np.cos(x - cen) - math.pi * delta

            xs = np.arange(lo, hi, 1e-3)
            vals = f(xs)
            idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
            found = []
            for i in idx:
                a0, b0 = xs[i], xs[i + 1]
                for _ in range(60):
                    m = 0.5 * (a0 + b0)
                    if f(a0) * f(m) <= 0:
                        b0 = m
                    else:
                        a0 = m
                found.append(0.5 * (a0 + b0))
            if len(found) != len(roots) or any(
                    abs(x - r.x) > 1e-6 for x, r in zip(found, roots)):
                raise _Fail("solver disagrees with dense sign scan",
                            {"n": n, "a": a, "k": k, "l": l, "delta": delta,
                             "solver": [r.x for r in roots], "scan": found})
        return "10 random configurations vs 1e-3 sign scan + bisection"

    def delta_band() -> str:
        for _ in range(50):
            n = int(rng.integers(2, 9))
            a = float(rng.uniform(0.2, 4.0))
            k, l = (int(v) for v in rng.choice(n, size=2, replace=False))
            s = math.sin(math.pi * (l - k) / n)
            if abs(s) < 1e-9:
                continue
            delta = int(rng.integers(-3, 4))
            bound = abs(2.0 * a * s) / math.pi
            params = SineFamilyParams(n, a)
            roots = solve_lift_intersections(params, k, l, delta,
                                             window=(-50.0, 50.0))
            if abs(delta) > bound + 1e-9 and roots:
                raise _Fail("roots beyond the amplitude band",
                            {"n": n, "a": a, "k": k, "l": l, "delta": delta})
            if abs(delta) < bound - 1e-9 and not roots:
                raise _Fail("missing roots inside the amplitude band",
                            {"n": n, "a": a, "k": k, "l": l, "delta": delta})
        return "50 random (N, a, k, l, delta) band checks"

    return [("threshold-branches", threshold_branches),
            ("translate-covariance", translate_covariance),
            ("scaling-covariance", scaling_covariance),
            ("root-cadence", root_cadence),
            ("scan-agreement", scan_agreement),
            ("delta-band", delta_band)]


# -- classifier suite ----------------------------------------------------

_CANON = ((2, 1.0), (2, 2.0), (3, 1.0), (3, 3.0))


def _family(params: SineFamilyParams, perturb=None) -> ArcFamily:
    arcs, groups, parities = family_arcs(params, perturb=perturb)
    return ArcFamily(arcs, Point2(0.0, 0.0), groups=groups, parities=parities)


def _classifier_props(rng: np.random.Generator):
    def method_agreement() -> str:
        for n, a in _CANON:
            params = SineFamilyParams(n, a)
            fam = _family(params)
            va = classify_analytic(params)
            vl = classify_lift(fam)
            ve = classify_enclosure(fam)
            if not (va == vl == ve):
                raise _Fail("methods disagree",
                            {"n": n, "a": a, "analytic": str(va),
                             "lift": str(vl), "enclosure": str(ve)})
        return "4 canonical configurations x 3 methods"

    def order_invariance() -> str:
        for n, a in ((2, 1.0), (3, 3.0)):
            fam = _family(SineFamilyParams(n, a))
            perm = list(rng.permutation(len(fam.arcs)))
            shuffled = ArcFamily([fam.arcs[i] for i in perm],
                                 fam.common_endpoint,
                                 groups=[fam.groups[i] for i in perm],
                                 parities=[fam.parities[i] for i in perm])
            if classify_lift(fam) != classify_lift(shuffled):
                raise _Fail("verdict depends on arc order",
                            {"n": n, "a": a, "perm": [int(i) for i in perm]})
        return "random arc permutations leave the verdict fixed"

    def rotation_equivariance() -> str:
        for n, a in ((2, 1.0), (3, 3.0)):
            fam = _family(SineFamilyParams(n, a))
            th = float(rng.uniform(0.0, 2 * math.pi))
            c, s = math.cos(th), math.sin(th)
            rot = ArcFamily(
                [arc.map_vertices(lambda v: v @ np.array([[c, s], [-s, c]]))
                 for arc in fam.arcs],
                fam.common_endpoint, groups=fam.groups, parities=fam.parities)
            if classify_lift(fam) != classify_lift(rot):
                raise _Fail("verdict not rotation invariant",
                            {"n": n, "a": a, "angle": th})
        return "rigid rotation about the base point"

    def scale_equivariance() -> str:
        for n, a in ((2, 1.0), (3, 3.0)):
            fam = _family(SineFamilyParams(n, a))
            lam = float(rng.uniform(0.5, 2.0))
            scaled = ArcFamily([arc.map_vertices(lambda v: v * lam)
                                for arc in fam.arcs],
                               fam.common_endpoint,
                               groups=fam.groups, parities=fam.parities)
            if classify_lift(fam) != classify_lift(scaled):
                raise _Fail("verdict not scale invariant",
                            {"n": n, "a": a, "lambda": lam})
        return "similarity scaling about the base point"

    def perturbation_stability() -> str:
        for n, a in ((2, 1.0), (3, 3.0)):
            params = SineFamilyParams(n, a)
            want = classify_analytic(params)
            bound = 0.25 * plaiting_threshold(n)
            for trial in range(3):
                coef = rng.uniform(-1.0, 1.0, size=(2 * n, 3))

                def perturb(k, parity, xs, coef=coef):
                    c = coef[2 * k + parity]
                    w = (c[0] * np.sin(0.5 * xs) + c[1] * np.cos(0.3 * xs)
                         + c[2] * np.sin(0.2 * xs + 1.0))
                    return bound / 3.0 * w

                got = classify_lift(_family(params, perturb=perturb))
                if got != want:
                    raise _Fail("verdict unstable under smooth perturbation",
                                {"n": n, "a": a, "trial": trial,
                                 "got": str(got), "want": str(want)})
        return "smooth fields below a*/4 leave both verdicts fixed"

    def coboundary_on_plaited() -> str:
        for n, a in ((2, 1.0), (3, 1.0)):
            rep = lift_report(_family(SineFamilyParams(n, a)))
            if rep.verdict != Verdict.PLAITED:
                raise _Fail("expected plaited canonical configuration",
                            {"n": n, "a": a, "got": str(rep.verdict)})
            c = rep.coboundary
            if c is None:
                raise _Fail("plaited verdict without a coboundary",
                            {"n": n, "a": a})
            for (i, j), offs in rep.offsets.items():
                for m in offs:
                    if m != c[i] - c[j]:
                        raise _Fail("coboundary does not reproduce offsets",
                                    {"n": n, "a": a, "pair": [i, j],
                                     "offset": m, "c_i": c[i], "c_j": c[j]})
        return "offsets equal c_i - c_j on plaited configurations"

    return [("method-agreement", method_agreement),
            ("order-invariance", order_invariance),
            ("rotation-equivariance", rotation_equivariance),
            ("scale-equivariance", scale_equivariance),
            ("perturbation-stability", perturbation_stability),
            ("coboundary-on-plaited", coboundary_on_plaited)]


# -- ifs suite -----------------------------------------------------------

def _ifs_props(rng: np.random.Generator):
    def stabilization() -> str:
        for variant in ("nesting", "plaiting"):
            sys_ = builtin_system(variant)
            for n in range(0, 3):
                a = sys_.stage(n).curve.vertices
                b = sys_.stage(n + 1).curve.vertices
                outside = a[~sys_.in_cells(a, n + 1)]
                bset = {(v[0], v[1]) for v in b}
                for v in outside:
                    if (v[0], v[1]) not in bset:
                        raise _Fail("stage not vertex-stable outside cells",
                                    {"variant": variant, "n": n,
                                     "vertex": [float(v[0]), float(v[1])]})
        return "stages 0..3, exact vertex membership outside depth-(n+1) cells"

    def count_law() -> str:
        for variant in ("nesting", "plaiting"):
            sys_ = builtin_system(variant)
            c0 = len(sys_.stage_intersections(0))
            c1 = len(sys_.stage_intersections(1))
            w = c1 - 2 * c0
            expect = c1
            for n in range(2, 5):
                expect = w + 2 * expect
                got = len(sys_.stage_intersections(n))
                if got != expect:
                    raise _Fail("crossing count breaks the recurrence",
                                {"variant": variant, "n": n,
                                 "got": got, "want": expect})
        return "c(n) = w + 2 c(n-1) through stage 4, both variants"

    def accumulation_decay() -> str:
        sys_ = builtin_system("nesting")
        n = 5
        recs = sys_.stage_intersections(n)
        pts = np.array([[r.point.x, r.point.y] for r in recs])
        es = []
        for d in range(1, n + 1):
            worst = 0.0
            targets = sys_.attractor_points(d)
            for w, t in zip(sys_.words(d), targets):
                inside = _in_one_cell(sys_, pts, w)
                if not np.any(inside):
                    continue
                dd = np.hypot(pts[inside, 0] - t.x, pts[inside, 1] - t.y)
                worst = max(worst, float(dd.max()))
            es.append(worst)
        ds = np.arange(1, n + 1)
        slope = float(np.polyfit(ds, np.log(es), 1)[0])
        want = math.log(1.0 / 5.0)
        if abs(slope - want) > 0.1 * abs(want):
            raise _Fail("in-cell crossing decay off the contraction rate",
                        {"slope": slope, "want": want, "max_dists": es})
        return f"fitted exponent {slope:.4f} vs ln(1/5) = {want:.4f}"

    def witness_dichotomy() -> str:
        sys_n = builtin_system("nesting")
        sys_p = builtin_system("plaiting")
        if sys_n.nesting_witnesses(2, 0) != [False]:
            raise _Fail("nesting depth-0 witness should be false", {"n": 2})
        for depth in (1, 2):
            if not all(sys_n.nesting_witnesses(2, depth)):
                raise _Fail("nesting witnesses false at depth",
                            {"depth": depth, "n": 2})
            if any(sys_p.nesting_witnesses(2, depth)):
                raise _Fail("plaiting witnesses true at depth",
                            {"depth": depth, "n": 2})
        return "nesting true at depths 1-2, false at 0; plaiting all false"

    def simplicity() -> str:
        for variant in ("nesting", "plaiting"):
            sys_ = builtin_system(variant)
            hits = self_intersections(sys_.stage(4).curve)
            if hits:
                p = hits[0].point
                raise _Fail("stage curve self-intersects",
                            {"variant": variant, "n": 4,
                             "point": [p.x, p.y]})
        return "stage-4 curves are simple arcs, both variants"

    def serialization_roundtrip() -> str:
        sys_ = builtin_system("nesting")
        back = SubstitutionSystem.from_json(sys_.to_json())
        r1 = sys_.stage_intersections(2)
        r2 = back.stage_intersections(2)
        if len(r1) != len(r2) or any(
                abs(a.t_first - b.t_first) > 1e-12 for a, b in zip(r1, r2)):
            raise _Fail("serialized system drifts",
                        {"count": [len(r1), len(r2)]})
        return "to_json/from_json preserves stage-2 crossings exactly"

    return [("stabilization", stabilization),
            ("count-law", count_law),
            ("accumulation-decay", accumulation_decay),
            ("witness-dichotomy", witness_dichotomy),
            ("simplicity", simplicity),
            ("serialization-roundtrip", serialization_roundtrip)]


def _in_one_cell(sys_: SubstitutionSystem, pts: np.ndarray, word) -> np.ndarray:
    from .substitution import compose
    x0, x1, y0, y1 = sys_.domain
    q = compose(sys_, word).inverse_apply(pts)
    return ((q[:, 0] >= x0 - 1e-12) & (q[:, 0] <= x1 + 1e-12) &
            (q[:, 1] >= y0 - 1e-12) & (q[:, 1] <= y1 + 1e-12))


_SUITES = {"sine": _sine_props, "classifier": _classifier_props,
           "ifs": _ifs_props}


def run_suite(suite: str, seed: int = DEFAULT_SEED) -> list[SuiteReport]:
    """Run one suite, or all three for suite='all'."""
    if suite != "all" and suite not in _SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    names = list(_SUITES) if suite == "all" else [suite]
    reports = []
    for name in names:
        rng = np.random.default_rng([seed, _SUITE_IDS[name]])
        report = SuiteReport(name, seed)
        for prop_name, fn in _SUITES[name](rng):
            report.results.append(_run(prop_name, fn))
        reports.append(report)
    return reports
