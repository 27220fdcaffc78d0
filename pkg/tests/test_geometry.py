import math

import numpy as np
import pytest

from conftest import pixel_fraction
from vof2d.errors import InvalidArgumentError
from vof2d.geometry import (ConvexPolygon, HalfPlane, Rect, area_fraction_halfplane,
                            circle_cell_fraction, clip_polygon_halfplane, position_plic)

UNIT_CENTERED = Rect(-0.5, -0.5, 0.5, 0.5)
UNIT = Rect(0.0, 0.0, 1.0, 1.0)

# frozen 4096x4096 pixel-center count for normal (3,4)/5, offset -0.1 on [0,1]^2
PIXEL_345_VALUE = 0.625


class TestAreaFraction:
    def test_horizontal_split_is_half(self):
        h = HalfPlane((0.0, 1.0), 0.0, anchor=(0.0, 0.0))
        assert area_fraction_halfplane(h, UNIT_CENTERED) == pytest.approx(0.5, abs=1e-15)

    def test_empty_and_full_at_half_diagonal(self):
        half_diag = 0.5 * UNIT_CENTERED.diagonal
        n = (0.6, 0.8)
        assert area_fraction_halfplane(HalfPlane(n, half_diag), UNIT_CENTERED) == 0.0
        assert area_fraction_halfplane(HalfPlane(n, -half_diag), UNIT_CENTERED) == 1.0

    def test_345_case_matches_pixel_oracle(self):
        h = HalfPlane((0.6, 0.8), -0.1, anchor=UNIT.center)
        got = area_fraction_halfplane(h, UNIT)
        assert got == pytest.approx(PIXEL_345_VALUE, abs=1e-6)

    def test_random_cases_match_pixel_oracle(self, rng):
        for _ in range(5):
            phi = rng.uniform(0, 2 * math.pi)
            n = (math.cos(phi), math.sin(phi))
            s = rng.uniform(-0.4, 0.4)
            h = HalfPlane(n, s, anchor=UNIT.center)
            got = area_fraction_halfplane(h, UNIT)
            ref = pixel_fraction(n[0], n[1], s, 0.5, 0.5, 1.0, 1.0, res=2048)
            assert got == pytest.approx(ref, abs=5e-4)

    def test_complementarity(self, rng):
        for _ in range(200):
            phi = rng.uniform(0, 2 * math.pi)
            n = (math.cos(phi), math.sin(phi))
            s = rng.uniform(-1.0, 1.0)
            cell = Rect(0.3, -0.2, 1.1, 0.5)
            f = area_fraction_halfplane(HalfPlane(n, s, anchor=cell.center), cell)
            fc = area_fraction_halfplane(HalfPlane((-n[0], -n[1]), -s, anchor=cell.center), cell)
            assert f + fc == pytest.approx(1.0, abs=1e-12)

    def test_monotone_in_offset(self):
        n = (0.28, 0.96)
        offs = np.linspace(-1.0, 1.0, 101)
        vals = [area_fraction_halfplane(HalfPlane(n, s), UNIT_CENTERED) for s in offs]
        assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidArgumentError):
            area_fraction_halfplane(HalfPlane((0.0, 1.0), math.nan), UNIT_CENTERED)
        with pytest.raises(InvalidArgumentError):
            HalfPlane((math.inf, 1.0), 0.0)

    def test_rejects_degenerate_normal(self):
        with pytest.raises(InvalidArgumentError):
            HalfPlane((0.0, 0.0), 0.0)
        with pytest.raises(InvalidArgumentError):
            HalfPlane((0.5, 0.5), 0.0)  # not unit length


class TestPositionPlic:
    def test_empty_and_full_targets(self):
        half_diag = 0.5 * UNIT_CENTERED.diagonal
        h0 = position_plic((0.6, 0.8), 0.0, UNIT_CENTERED)
        h1 = position_plic((0.6, 0.8), 1.0, UNIT_CENTERED)
        assert h0.offset == pytest.approx(half_diag)
        assert h1.offset == pytest.approx(-half_diag)

    def test_quarter_height_line(self):
        h = position_plic((0.0, 1.0), 0.25, UNIT_CENTERED)
        # line at quarter height: offset -(-0.25) from center
        assert h.offset == pytest.approx(-(-0.25), abs=1e-14)
        assert area_fraction_halfplane(h, UNIT_CENTERED) == pytest.approx(0.25, abs=1e-12)

    def test_round_trip_10k_random(self, rng):
        worst = 0.0
        for _ in range(10_000):
            phi = rng.uniform(0, 2 * math.pi)
            n = (math.cos(phi), math.sin(phi))
            alpha = rng.uniform(0.0, 1.0)
            h = position_plic(n, alpha, UNIT_CENTERED)
            worst = max(worst, abs(area_fraction_halfplane(h, UNIT_CENTERED) - alpha))
        assert worst <= 1e-12

    def test_round_trip_anisotropic_cell(self, rng):
        cell = Rect(2.0, -1.0, 2.25, -0.9375)  # dx != dy, away from origin
        for _ in range(500):
            phi = rng.uniform(0, 2 * math.pi)
            alpha = rng.uniform(0, 1)
            h = position_plic((math.cos(phi), math.sin(phi)), alpha, cell)
            assert area_fraction_halfplane(h, cell) == pytest.approx(alpha, abs=1e-12)

    def test_target_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            position_plic((0.0, 1.0), 1.5, UNIT_CENTERED)
        with pytest.raises(InvalidArgumentError):
            position_plic((0.0, 1.0), -1e-6, UNIT_CENTERED)


class TestClip:
    def test_containing_halfplane_returns_polygon(self):
        poly = ConvexPolygon.from_rect(UNIT)
        h = HalfPlane((0.0, 1.0), -10.0)
        out = clip_polygon_halfplane(poly, h)
        assert out.area() == pytest.approx(poly.area(), abs=1e-14)

    def test_excluding_halfplane_returns_empty(self):
        poly = ConvexPolygon.from_rect(UNIT)
        h = HalfPlane((0.0, 1.0), 10.0)
        out = clip_polygon_halfplane(poly, h)
        assert out.is_empty
        assert out.area() == 0.0

    def test_unit_square_clipped_at_x03(self):
        poly = ConvexPolygon.from_rect(UNIT)
        h = HalfPlane((1.0, 0.0), -0.3)  # keep x <= 0.3
        out = clip_polygon_halfplane(poly, h)
        assert out.area() == pytest.approx(0.3, abs=1e-12)

    def test_clip_additivity(self, rng):
        poly = ConvexPolygon(np.array([[0.0, 0.0], [2.0, 0.1], [2.4, 1.5], [0.9, 2.0]]))
        for _ in range(300):
            phi = rng.uniform(0, 2 * math.pi)
            n = (math.cos(phi), math.sin(phi))
            s = rng.uniform(-2.0, 2.0)
            a = clip_polygon_halfplane(poly, HalfPlane(n, s, anchor=(1.0, 1.0))).area()
            b = clip_polygon_halfplane(poly, HalfPlane((-n[0], -n[1]), -s, anchor=(1.0, 1.0))).area()
            assert a + b == pytest.approx(poly.area(), abs=1e-12)

    def test_agrees_with_area_fraction(self, rng):
        cell = Rect(0.25, 0.5, 0.75, 1.0)
        poly = ConvexPolygon.from_rect(cell)
        for _ in range(300):
            phi = rng.uniform(0, 2 * math.pi)
            n = (math.cos(phi), math.sin(phi))
            s = rng.uniform(-0.5, 0.5)
            h = HalfPlane(n, s, anchor=cell.center)
            assert clip_polygon_halfplane(poly, h).area() / cell.area == pytest.approx(
                area_fraction_halfplane(h, cell), abs=1e-12)


class TestCircleFraction:
    def test_cell_inside_disk(self):
        assert circle_cell_fraction((0.0, 0.0), 5.0, UNIT) == 1.0

    def test_cell_outside_disk(self):
        assert circle_cell_fraction((10.0, 0.0), 1.0, UNIT) == 0.0

    def test_quarter_disk(self):
        got = circle_cell_fraction((0.0, 0.0), 1.0, UNIT)
        assert got == pytest.approx(math.pi / 4.0, abs=1e-10)

    def test_grid_sum_recovers_disk_area(self):
        # 24x24 cells covering [-1.2, 1.2]^2 against the unit disk
        n = 24
        w = 2.4 / n
        total = 0.0
        for i in range(n):
            for j in range(n):
                cell = Rect(-1.2 + i * w, -1.2 + j * w, -1.2 + (i + 1) * w, -1.2 + (j + 1) * w)
                total += circle_cell_fraction((0.0, 0.0), 1.0, cell) * cell.area
        assert total == pytest.approx(math.pi, rel=1e-9)

    def test_small_disk_inside_cell(self):
        got = circle_cell_fraction((0.5, 0.5), 0.1, UNIT)
        assert got == pytest.approx(math.pi * 0.01, rel=1e-8)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(InvalidArgumentError):
            circle_cell_fraction((0.0, 0.0), 0.0, UNIT)
