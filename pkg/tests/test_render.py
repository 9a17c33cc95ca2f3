import math
import re

import numpy as np
import pytest

from plaitnest import Polyline, SceneSpec, parse_svg_paths, render_svg
from plaitnest.errors import EmptyScene
from plaitnest.render import BLACK, BLUE, CLIP_FRACTION, FAMILY_COLORS, FIGURES, RED

EXPECTED_PATHS = {"lifts": 3, "family-small": 3, "family-large": 3,
                  "stage-1": 2, "stage-2": 2, "stage-3": 2, "stage-4": 2}

COORD_RE = re.compile(r"^-?\d+\.\d{6}$")


def simple_scene(**kw):
    curves = [(Polyline([(1.0, 1.0), (2.0, 1.5), (3.0, 1.0)]), "#336699", 1.0)]
    kw.setdefault("viewport", (0.0, 0.0, 4.0, 3.0))
    return SceneSpec(curves, **kw)


class TestSceneSpec:
    def test_bad_color(self):
        with pytest.raises(ValueError, match="color"):
            SceneSpec([(Polyline([(0, 0), (1, 1)]), "red", 1.0)])

    def test_bad_width(self):
        with pytest.raises(ValueError, match="width"):
            SceneSpec([(Polyline([(0, 0), (1, 1)]), "#000000", 0.0)])

    def test_bad_viewport(self):
        with pytest.raises(ValueError, match="viewport"):
            simple_scene(viewport=(0.0, 0.0, 0.0, 3.0))

    def test_bad_scale(self):
        with pytest.raises(ValueError, match="scale"):
            simple_scene(scale=-1.0)

    def test_curve_type(self):
        with pytest.raises(TypeError):
            SceneSpec([(np.zeros((3, 2)), "#000000", 1.0)])


class TestRenderSvg:
    def test_deterministic(self):
        assert render_svg(simple_scene()) == render_svg(simple_scene())

    def test_empty_scene(self):
        tiny = Polyline([(-1e-6, 0.0), (1e-6, 0.0)])
        scene = SceneSpec([(tiny, "#000000", 1.0)],
                          viewport=(-1.0, -1.0, 2.0, 2.0))
        with pytest.raises(EmptyScene):
            render_svg(scene)

    def test_one_group_per_curve_plus_rects(self):
        curves = [(Polyline([(1, 1), (2, 2)]), "#000000", 1.0),
                  (Polyline([(1, 2), (2, 1)]), "#CC0000", 1.0)]
        scene = SceneSpec(curves, boxes=[(1.0, 1.0, 0.5, 0.5)],
                          viewport=(0.0, 0.0, 3.0, 3.0))
        data = render_svg(scene).decode()
        assert data.count("<g stroke=") == 3
        assert data.count("<rect ") == 1

    def test_coordinates_have_six_decimals(self):
        data = render_svg(simple_scene()).decode()
        for d in re.findall(r'<path d="([^"]+)"', data):
            for pair in d.replace("M ", "").replace("L ", "").split():
                for tok in pair.split(","):
                    assert COORD_RE.match(tok), tok

    def test_roundtrip(self):
        scene = simple_scene(scale=100.0)
        parsed = parse_svg_paths(render_svg(scene), scene.viewport, scene.scale)
        assert len(parsed) == 1
        color, polys = parsed[0]
        assert color == "#336699"
        assert len(polys) == 1
        want = scene.curves[0][0].vertices
        assert np.allclose(polys[0].vertices, want, atol=1e-7)

    def test_origin_clip_splits_path(self):
        scene = SceneSpec([(Polyline([(-1.0, 0.0), (1.0, 0.0)]), "#000000", 1.0)],
                          viewport=(-1.0, -1.0, 2.0, 2.0), scale=100.0)
        parsed = parse_svg_paths(render_svg(scene), scene.viewport, scene.scale)
        (color, polys), = parsed
        assert len(polys) == 2
        r_clip = CLIP_FRACTION * math.hypot(2.0, 2.0)
        for poly in polys:
            assert np.abs(poly.vertices[:, 0]).min() >= r_clip - 1e-6

    def test_rects_invisible_to_parser(self):
        scene = SceneSpec([(Polyline([(1, 1), (2, 2)]), "#000000", 1.0)],
                          boxes=[(0.5, 0.5, 1.0, 1.0)],
                          viewport=(0.0, 0.0, 3.0, 3.0))
        assert len(parse_svg_paths(render_svg(scene))) == 1

    def test_negative_zero_normalized(self):
        scene = SceneSpec([(Polyline([(0.0, 3.0), (4.0, 0.0)]), "#000000", 1.0)],
                          viewport=(0.0, 0.0, 4.0, 3.0))
        assert b"-0.000000" not in render_svg(scene)


class TestFigures:
    def test_names_frozen(self):
        assert set(FIGURES) == set(EXPECTED_PATHS)

    @pytest.mark.parametrize("name", sorted(EXPECTED_PATHS))
    def test_path_counts(self, name):
        parsed = parse_svg_paths(render_svg(FIGURES[name]()))
        assert len(parsed) == EXPECTED_PATHS[name]

    def test_lift_colors(self):
        parsed = parse_svg_paths(render_svg(FIGURES["lifts"]()))
        assert [c for c, _ in parsed] == list(FAMILY_COLORS)

    def test_family_colors(self):
        parsed = parse_svg_paths(render_svg(FIGURES["family-small"]()))
        assert [c for c, _ in parsed] == list(FAMILY_COLORS)

    def test_stage_colors_and_rects(self):
        for n in (1, 2, 3):
            data = render_svg(FIGURES[f"stage-{n}"]())
            parsed = parse_svg_paths(data)
            assert [c for c, _ in parsed] == [BLACK, RED]
            assert data.decode().count("<rect ") == 2 ** n

    def test_figure_deterministic(self):
        assert render_svg(FIGURES["stage-2"]()) == render_svg(FIGURES["stage-2"]())

    def test_lifts_notch_only_first_graph(self):
        # only the k = 0 graph passes through the plane origin, so the
        # notch splits it and leaves the other two whole
        scene = FIGURES["lifts"]()
        parsed = parse_svg_paths(render_svg(scene), scene.viewport, scene.scale)
        assert [len(polys) for _, polys in parsed] == [2, 1, 1]
        gap_edges = [parsed[0][1][0].vertices[-1], parsed[0][1][1].vertices[0]]
        for p in gap_edges:
            assert math.hypot(*p) < 0.05
