import math

import numpy as np
import pytest

from plaitnest import (LiftedArcId, SineFamilyParams, classify_analytic,
                       crossing_deltas, family_arcs, plaiting_threshold,
                       sample_gamma, solve_lift_intersections, Verdict)
from plaitnest.errors import DegenerateAmplitude, IdenticalArcs, WindowTooCoarse
from plaitnest.sinefamily import (DEFAULT_WINDOW, lifted_point, project,
                                  translate_check)

from oracles import scan_crossings, scan_offsets


class TestThreshold:
    def test_even_is_half_pi_exactly(self):
        for n in (2, 4, 6, 8, 10):
            assert plaiting_threshold(n) == math.pi / 2.0

    def test_odd_formula(self):
        for n in (3, 5, 7, 9):
            want = math.pi / (2.0 * math.sin(math.pi * (n - 1) / (2 * n)))
            assert plaiting_threshold(n) == pytest.approx(want, abs=1e-15)

    def test_frozen_values(self):
        assert plaiting_threshold(2) == pytest.approx(1.5707963267948966)
        assert plaiting_threshold(3) == pytest.approx(1.8137993642342178)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            plaiting_threshold(1)

    def test_odd_decreases_toward_half_pi(self):
        vals = [plaiting_threshold(n) for n in (3, 5, 7, 9, 11)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] > math.pi / 2.0


class TestClassifyAnalytic:
    def test_dichotomy(self):
        for n in (2, 3, 5, 8):
            ast = plaiting_threshold(n)
            assert classify_analytic(
                SineFamilyParams(n, 0.9 * ast)) == Verdict.PLAITED
            assert classify_analytic(
                SineFamilyParams(n, 1.1 * ast)) == Verdict.NESTED
            # at the threshold itself: nested (strict inequality below)
            assert classify_analytic(
                SineFamilyParams(n, ast)) == Verdict.NESTED

    def test_sign_symmetric(self):
        assert classify_analytic(SineFamilyParams(3, -1.0)) == Verdict.PLAITED
        assert classify_analytic(SineFamilyParams(3, -3.0)) == Verdict.NESTED

    def test_zero_amplitude_rejected(self):
        with pytest.raises(DegenerateAmplitude):
            classify_analytic(SineFamilyParams(2, 0.0))


class TestSolveLiftIntersections:
    def test_matches_scan_oracle_spot(self):
        for n, k, l, delta, a in [(2, 0, 1, 0, 1.0), (2, 0, 1, 1, 2.0),
                                  (3, 0, 2, -1, 1.7), (5, 1, 4, 2, 3.3),
                                  (8, 2, 7, 0, 0.4)]:
            params = SineFamilyParams(n, a)
            lib = [r.x for r in solve_lift_intersections(params, k, l, delta)]
            orc = scan_crossings(a, n, k, l, delta, params.window)
            assert len(lib) == len(orc)
            np.testing.assert_allclose(lib, orc, atol=1e-9)

    def test_band_edge_empty(self):
        # |pi delta| > 2|a sin(...)|: no crossings
        params = SineFamilyParams(2, 1.0)   # band: |delta| <= 2/pi < 1
        assert solve_lift_intersections(params, 0, 1, 1) == []
        assert solve_lift_intersections(params, 0, 1, -1) == []

    def test_tangency_flagged(self):
        # amplitude tuned so pi*delta equals the coefficient exactly
        n, k, l, delta = 2, 0, 1, 1
        a = math.pi * delta / (2.0 * math.sin(math.pi * (l - k) / n))
        roots = solve_lift_intersections(SineFamilyParams(n, a), k, l, delta)
        assert roots and all(r.tangent for r in roots)
        # one root per period instead of two
        lo, hi = DEFAULT_WINDOW
        assert len(roots) == pytest.approx((hi - lo) / (2 * math.pi), abs=1)

    def test_same_arc_rejected(self):
        params = SineFamilyParams(3, 1.0)
        with pytest.raises(IdenticalArcs):
            solve_lift_intersections(params, 1, 1, 0)

    def test_coincident_mod_n(self):
        params = SineFamilyParams(3, 1.0)
        with pytest.raises(IdenticalArcs):
            solve_lift_intersections(params, 0, 3, 0)
        assert solve_lift_intersections(params, 0, 3, 2) == []

    def test_roots_sorted_and_in_window(self):
        params = SineFamilyParams(4, 2.0)
        roots = solve_lift_intersections(params, 0, 3, 1)
        xs = [r.x for r in roots]
        assert xs == sorted(xs)
        lo, hi = params.window
        assert all(lo <= x <= hi for x in xs)

    def test_custom_window(self):
        params = SineFamilyParams(2, 1.0)
        roots = solve_lift_intersections(params, 0, 1, 0,
                                         window=(0.1, 0.1 + 2.0 * math.pi))
        assert len(roots) == 2
        # both endpoints exactly on roots: the closed window keeps them
        roots = solve_lift_intersections(params, 0, 1, 0,
                                         window=(0.0, 2.0 * math.pi))
        assert len(roots) == 3

    def test_delta_zero_cadence(self):
        params = SineFamilyParams(3, 1.3)
        rng = np.random.default_rng(5)
        for _ in range(20):
            t0 = rng.uniform(-20.0, 10.0)
            roots = solve_lift_intersections(
                params, 0, 1, 0, window=(t0, t0 + 2.0 * math.pi))
            assert len(roots) in (2, 3)  # 3 only when an endpoint is a root


class TestCrossingDeltas:
    def test_matches_scan(self):
        for n, a in [(2, 1.0), (2, 2.0), (3, 1.0), (3, 3.0)]:
            params = SineFamilyParams(n, a)
            for k in range(n):
                for l in range(k + 1, n):
                    got = set(crossing_deltas(params, k, l))
                    want = {d for d in scan_offsets(a, n, k, l, params.window)
                            if d % 2 == 0}
                    assert got == want, (n, a, k, l)

    def test_parity_filter(self):
        params = SineFamilyParams(2, 2.5)
        evens = crossing_deltas(params, 0, 1, 0, 0)
        odds = crossing_deltas(params, 0, 1, 0, 1)
        assert all(d % 2 == 0 for d in evens)
        assert all(d % 2 == 1 for d in odds)

    def test_same_graph_empty(self):
        assert crossing_deltas(SineFamilyParams(2, 1.0), 1, 1) == []


class TestCovariance:
    def test_translate_check_random(self):
        rng = np.random.default_rng(17)
        params = SineFamilyParams(5, 2.2)
        for _ in range(500):
            k = int(rng.integers(0, 5))
            x = float(rng.uniform(-20, 10))
            assert translate_check(params, LiftedArcId(k, 0), x)

    def test_scaling_covariance_pointwise(self):
        # e^{2 pi/N} gamma_k(x) = gamma_{k+1}(x + 2 pi/N), wrap included
        rng = np.random.default_rng(29)
        for n in (2, 3, 6):
            params = SineFamilyParams(n, 1.4)
            lam = math.exp(2.0 * math.pi / n)
            for _ in range(200):
                k = int(rng.integers(0, n))
                x = float(rng.uniform(-6, 3))
                p = project(lifted_point(params, LiftedArcId(k, 0), x))
                q = project(lifted_point(params,
                                         LiftedArcId((k + 1) % n, 0),
                                         x + 2.0 * math.pi / n))
                scale = max(1.0, lam * math.exp(x))
                assert abs(lam * p.x - q.x) <= 1e-12 * scale
                assert abs(lam * p.y - q.y) <= 1e-12 * scale


class TestSampling:
    WINDOW = (-6.0 * math.pi, math.pi)

    def test_gamma_starts_at_origin(self):
        arc = sample_gamma(SineFamilyParams(3, 1.0, self.WINDOW), 0, 0.05)
        assert arc.vertices[0, 0] == 0.0 and arc.vertices[0, 1] == 0.0
        r = np.hypot(arc.vertices[1:, 0], arc.vertices[1:, 1])
        assert (r > 1e-12).all()

    def test_gamma_lies_on_curve(self):
        params = SineFamilyParams(3, 1.0, self.WINDOW)
        arc = sample_gamma(params, 1, 0.05)
        v = arc.vertices[1:]
        x = 0.5 * np.log(v[:, 0] ** 2 + v[:, 1] ** 2)
        theta_expect = params.amplitude * np.sin(
            x - 2.0 * math.pi * 1 / params.n_arcs)
        recon = np.column_stack([np.exp(x) * np.cos(theta_expect),
                                 np.exp(x) * np.sin(theta_expect)])
        np.testing.assert_allclose(recon, v, atol=1e-9)

    def test_image_steps_bounded(self):
        step = 0.05
        arc = sample_gamma(SineFamilyParams(2, 1.0, self.WINDOW), 0, step)
        d = np.hypot(*np.diff(arc.vertices, axis=0).T)
        assert d[1:].max() <= step * (1.0 + 1e-9)

    def test_family_shapes(self):
        arcs, groups, parities = family_arcs(SineFamilyParams(3, 1.0))
        assert len(arcs) == 6
        assert groups == [0, 0, 1, 1, 2, 2]
        assert parities == [0, 1, 0, 1, 0, 1]

    def test_bad_inputs(self):
        params = SineFamilyParams(3, 1.0, self.WINDOW)
        with pytest.raises(ValueError):
            sample_gamma(params, 0, -0.1)
        with pytest.raises(ValueError):
            sample_gamma(params, 7, 0.05)
        with pytest.raises(ValueError):
            SineFamilyParams(1, 1.0)
        with pytest.raises(ValueError):
            SineFamilyParams(3, 1.0, (2.0, 1.0))
        with pytest.raises(WindowTooCoarse):
            sample_gamma(params, 0, 1e-9, budget=1000)

    def test_params_json_roundtrip(self):
        p = SineFamilyParams(4, 2.5, (-10.0, 5.0))
        assert SineFamilyParams.from_json(p.to_json()) == p
