"""Shared oracles and helpers for the test suite."""

import math

import numpy as np
import pytest

from vof2d.geometry import rect_halfplane_fraction


def pixel_fraction(n1, n2, s, cx, cy, w, h, res=4096):
    """Brute-force pixel-center sampling of {(x - c) . n + s <= 0}."""
    x = cx - w / 2 + (np.arange(res) + 0.5) * (w / res)
    y = cy - h / 2 + (np.arange(res) + 0.5) * (h / res)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    return np.count_nonzero((xx - cx) * n1 + (yy - cy) * n2 + s <= 0.0) / (res * res)


def line_block(n1, n2, s_center, shape, anchor, dx=1.0):
    """Exact volume fractions induced by a straight line on a cell block.

    The line is anchored at the center of cell ``anchor``; fractions in the
    other cells follow by shifting the offset with the center displacement.
    """
    ni, nj = shape
    ai, aj = anchor
    ii, jj = np.meshgrid(np.arange(ni) - ai, np.arange(nj) - aj, indexing="ij")
    s = s_center + ii * dx * n1 + jj * dx * n2
    return rect_halfplane_fraction(n1, n2, s, 0.5 * dx, 0.5 * dx)


def angle_between(u, v):
    """Unsigned angle between two 2-vectors, radians."""
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    return abs(math.atan2(cross, dot))


@pytest.fixture
def rng():
    return np.random.default_rng(20240117)
