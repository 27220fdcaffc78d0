import math

import numpy as np
import pytest

from vof2d.errors import ConfigError
from vof2d.velocity import VelocityField, linear_field, time_linear_field, vortex_field

PAPER_LINEAR = linear_field(-0.2, 0.1, -2.0)


def test_linear_example_at_origin():
    v = PAPER_LINEAR.eval(0.0, np.array([0.0, 0.0]))
    assert v[0] == pytest.approx(-0.2)
    assert v[1] == 0.0


def test_linear_face_value():
    # v1 at (0.5, 0.125) = -0.2 + 0.05 - 0.25
    v = PAPER_LINEAR.eval(0.0, np.array([0.5, 0.125]))
    assert v[0] == pytest.approx(-0.4, abs=1e-15)


@pytest.mark.parametrize("field", [
    PAPER_LINEAR,
    vortex_field(0.1, 0.2),
    time_linear_field(-0.2, 0.1, -2.0, 0.2),
])
def test_wall_tangency(field, rng):
    x = np.stack([rng.uniform(0, 1, 50), np.zeros(50)], axis=-1)
    for t in (0.0, 0.07, 0.4):
        v = field.eval(t, x)
        assert np.all(v[..., 1] == 0.0)


def test_vortex_vanishes_at_half_period():
    f = vortex_field(0.1, 0.2)
    x = np.array([[0.3, 0.1], [0.7, 0.2]])
    v = f.eval(0.1, x)  # cos(pi/2) = 0
    assert np.allclose(v, 0.0, atol=1e-17)


def test_linear_gradient_matrix():
    g = PAPER_LINEAR.eval_gradient(0.0, np.array([0.3, 0.07]))
    assert np.allclose(g, [[0.1, -2.0], [0.0, -0.1]])


@pytest.mark.parametrize("field", [
    PAPER_LINEAR,
    vortex_field(0.15, 0.3),
    time_linear_field(0.1, -0.2, 0.7, 0.5),
])
def test_gradient_matches_finite_differences(field, rng):
    eps = 1e-6
    for _ in range(20):
        t = rng.uniform(0, 0.4)
        x = rng.uniform(0.05, 0.95, 2)
        g = field.eval_gradient(t, x)
        for j in range(2):
            dx = np.zeros(2)
            dx[j] = eps
            fd = (field.eval(t, x + dx) - field.eval(t, x - dx)) / (2 * eps)
            assert np.allclose(g[:, j], fd, atol=1e-6)


@pytest.mark.parametrize("field", [
    PAPER_LINEAR,
    vortex_field(0.1, 0.2),
    time_linear_field(-0.2, 0.1, -2.0, 0.2),
])
def test_divergence_free(field, rng):
    for _ in range(1000):
        t = rng.uniform(0, 1)
        x = rng.uniform(-1, 2, 2)
        g = field.eval_gradient(t, x)
        assert abs(g[0, 0] + g[1, 1]) <= 1e-12


def test_time_linear_approaches_linear_for_large_tau():
    slow = time_linear_field(-0.2, 0.1, -2.0, 1e9)
    x = np.array([0.4, 0.1])
    v_slow = slow.eval(0.37, x)
    v_lin = PAPER_LINEAR.eval(0.37, x)
    assert np.allclose(v_slow, v_lin, atol=1e-12)


def test_sup_norm_linear_at_corners():
    # |v| of the paper's field peaks at the (0, 0.25) corner
    got = PAPER_LINEAR.sup_norm((0.0, 1.0), (0.0, 0.25))
    expected = math.hypot(-0.2 - 2.0 * 0.25, 0.1 * 0.25)
    assert got == pytest.approx(expected)


def test_sup_norm_vortex_is_v0():
    assert vortex_field(0.1, 0.2).sup_norm((0.0, 1.0), (0.0, 0.25)) == pytest.approx(0.1)


def test_unknown_variant_rejected():
    with pytest.raises(ConfigError):
        VelocityField("spiral")
