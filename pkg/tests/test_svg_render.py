import math
import xml.etree.ElementTree as ET

import pytest

from wakefarm.energy_economics import Boundary, FarmLayout, Placement
from wakefarm.svg_render import render_layout_svg, render_line_chart
from wakefarm.turbine_model import default_catalog
from wakefarm.wake_engine import WakeParams, wake_radius

CAT = default_catalog()
WAKE = WakeParams(0.075)
SVG_NS = "{http://www.w3.org/2000/svg}"


def simple_layout(n=3, spacing=1500.0):
    turbines = tuple(Placement(i * spacing, 100.0 * i, CAT.by_name("22MW")) for i in range(n))
    return FarmLayout(
        turbines=turbines,
        substation=(0.0, -1500.0),
        boundary=Boundary(-3000.0, 8000.0, -3000.0, 3000.0),
    )


def cone_polygons(svg_text):
    root = ET.fromstring(svg_text)
    cones = []
    for poly in root.iter(f"{SVG_NS}polygon"):
        if "wake-cone" in (poly.get("class") or ""):
            pts = [tuple(map(float, pair.split(","))) for pair in poly.get("points").split()]
            cones.append((poly.get("class"), pts))
    return cones


class TestLayoutRender:
    def test_single_turbine_has_no_cones(self):
        svg = render_layout_svg(simple_layout(n=1), WAKE, dominant_thetas=[270.0, 180.0])
        assert cone_polygons(svg) == []

    def test_cone_geometry_parses_back(self):
        cone_length = 2200.0
        svg = render_layout_svg(
            simple_layout(n=3), WAKE, dominant_thetas=[270.0, 180.0], cone_length=cone_length
        )
        cones = cone_polygons(svg)
        assert len(cones) == 6  # two sectors x three turbines
        d = CAT.by_name("22MW").rotor_diameter
        for css, pts in cones:
            start_left, start_right, end_right, end_left = pts
            start_mid = ((start_left[0] + start_right[0]) / 2, (start_left[1] + start_right[1]) / 2)
            end_mid = ((end_left[0] + end_right[0]) / 2, (end_left[1] + end_right[1]) / 2)
            assert math.dist(start_mid, end_mid) == pytest.approx(cone_length, abs=0.5)
            start_half = math.dist(start_left, start_right) / 2
            end_half = math.dist(end_left, end_right) / 2
            assert start_half == pytest.approx(d / 2, abs=0.01)
            assert end_half == pytest.approx(wake_radius(cone_length, d, WAKE.k), abs=0.01)

    def test_primary_and_secondary_classes(self):
        svg = render_layout_svg(simple_layout(), WAKE, dominant_thetas=[270.0, 180.0])
        classes = {css for css, _ in cone_polygons(svg)}
        assert classes == {"wake-cone wake-cone-primary", "wake-cone wake-cone-secondary"}

    def test_marker_counts_and_boundary(self):
        layout = simple_layout(n=4)
        svg = render_layout_svg(layout, WAKE)
        root = ET.fromstring(svg)
        turbines = [c for c in root.iter(f"{SVG_NS}circle") if c.get("class") == "turbine"]
        assert len(turbines) == 4
        assert svg.count('class="boundary"') == 1
        # MST over 4 turbines + substation = 4 edges
        cables = [l for l in root.iter(f"{SVG_NS}line") if l.get("class") == "cable"]
        assert len(cables) == 4

    def test_deterministic_output(self):
        layout = simple_layout()
        assert render_layout_svg(layout, WAKE, [90.0]) == render_layout_svg(layout, WAKE, [90.0])

    def test_deficit_annotations(self):
        svg = render_layout_svg(simple_layout(n=2), WAKE, deficits=[0.0, 0.123])
        assert "deficit 0.123" in svg


class TestLineChart:
    def test_basic_chart(self):
        svg = render_line_chart([5, 10, 15], [1.0, 2.0, 1.5], "t", "x", "y")
        root = ET.fromstring(svg)
        polylines = list(root.iter(f"{SVG_NS}polyline"))
        assert len(polylines) == 1
        assert len(polylines[0].get("points").split()) == 3

    def test_rejects_mismatched_series(self):
        with pytest.raises(ValueError):
            render_line_chart([1, 2], [1.0], "t", "x", "y")
