import math

import numpy as np
import pytest

from plaitnest import Polyline, enclosure_check, enclosing_cycle
from plaitnest.errors import DegenerateArrangement, PointOnBoundary
from plaitnest.geometry.arrangement import Arrangement

from oracles import flood_enclosed, winding_angle_sum


def _square(r=1.0):
    return Polyline([[r, r], [-r, r], [-r, -r], [r, -r], [r, r]])


class TestArrangement:
    def test_two_crossing_segments(self):
        arr = Arrangement([Polyline([[-1, 0], [1, 0]]),
                           Polyline([[0, -1], [0, 1]])])
        # 4 edges around the shared node, no bounded face
        assert len(arr.edges) == 4
        assert all(w == 0 for w in arr.winding_cycles((0.5, 0.5)))

    def test_closed_square_faces(self):
        arr = Arrangement([_square()])
        # interior point: the inner and outer traversals wind oppositely
        assert sorted(arr.winding_cycles((0.0, 0.0))) == [-1, 1]
        assert all(w == 0 for w in arr.winding_cycles((3.0, 0.0)))

    def test_collinear_overlap_rejected(self):
        with pytest.raises(DegenerateArrangement):
            Arrangement([Polyline([[0, 0], [2, 0]]),
                         Polyline([[1, 0], [3, 0]])])

    def test_nodes_snap(self):
        eps = 1e-13
        arr = Arrangement([Polyline([[-1, 0], [1, 0]]),
                           Polyline([[0 + eps, -1], [0 - eps, 1]])])
        # the two crossing reports fall into one node cluster
        assert arr.node_xy.shape[0] == 5


class TestEnclosureCheck:
    def test_square_encloses_center_only(self):
        assert enclosure_check([_square()], [(0.0, 0.0), (2.0, 0.0)]) \
            == [True, False]

    def test_open_corridor(self):
        curves = [Polyline([[-2, -0.5], [2, -0.5]]),
                  Polyline([[-2, 0.5], [2, 0.5]])]
        assert enclosure_check(curves, [(0.0, 0.0)]) == [False]

    def test_triangle_from_three_segments(self):
        # pairwise crossing chords close a triangle around the centroid
        curves = [Polyline([[-2, -1], [2, -1]]),
                  Polyline([[-2, -1.5], [1, 3]]),
                  Polyline([[2, -1.5], [-1, 3]])]
        assert enclosure_check(curves, [(0.0, 0.0)]) == [True]
        cyc = enclosing_cycle(curves, (0.0, 0.0))
        assert cyc is not None
        assert winding_angle_sum(cyc, 0.0, 0.0) != 0

    def test_no_cycle_gives_none(self):
        curves = [Polyline([[-2, -0.5], [2, -0.5]])]
        assert enclosing_cycle(curves, (0.0, 0.0)) is None

    def test_target_on_curve_raises(self):
        with pytest.raises(PointOnBoundary):
            enclosure_check([_square()], [(1.0, 0.0)])

    def test_matches_flood_fill_oracle(self):
        rng = np.random.default_rng(23)
        agree = 0
        trials = 0
        while trials < 25:
            m = int(rng.integers(3, 7))
            curves = []
            for _ in range(m):
                ang = rng.uniform(0.0, math.pi)
                off = rng.uniform(-0.45, 0.45)
                d = np.array([math.cos(ang), math.sin(ang)])
                nvec = np.array([-d[1], d[0]])
                mid = nvec * off
                curves.append(Polyline(np.array([mid - 1.6 * d,
                                                 mid + 1.6 * d])))
            p = rng.uniform(-0.35, 0.35, 2)
            if min(c.distance_to(p) for c in curves) < 0.06:
                continue
            try:
                got = enclosure_check(curves, [tuple(p)])[0]
                want = flood_enclosed([c.vertices for c in curves],
                                      float(p[0]), float(p[1]))
            except (DegenerateArrangement, ValueError):
                continue
            assert got == want, f"scene {trials}: library {got} oracle {want}"
            agree += 1
            trials += 1
        assert agree == 25
