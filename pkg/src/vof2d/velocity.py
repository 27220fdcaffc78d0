"""Catalog of analytic, divergence-free velocity fields tangential to the wall.

Variants:
  linear       v(x) = (v0 + c1*x1 + c2*x2, -c1*x2)
  vortex       v(t,x) = v0*cos(pi*t/tau) * (-sin(pi*x1)*cos(pi*x2),
                                             cos(pi*x1)*sin(pi*x2))
  time_linear  cos(pi*t/tau) times the linear field

All parameters are dimensionless.  Fields are defined on all of R^2 so
face sampling near ghost layers needs no extrapolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

VARIANTS = ("linear", "vortex", "time_linear")


@dataclass(frozen=True)
class VelocityField:
    variant: str
    v0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    tau: float = 1.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown velocity variant {self.variant!r}")
        if self.variant in ("vortex", "time_linear") and not self.tau > 0.0:
            raise ConfigError("tau must be positive for time-dependent fields")

    # -- evaluation ---------------------------------------------------------

    def eval(self, t: float, x) -> np.ndarray:
        """Velocity vector(s) at time t; x has shape (..., 2)."""
        p = np.asarray(x, dtype=float)
        x1 = p[..., 0]
        x2 = p[..., 1]
        if self.variant == "linear":
            v1 = self.v0 + self.c1 * x1 + self.c2 * x2
            v2 = -self.c1 * x2
        elif self.variant == "time_linear":
            mod = np.cos(np.pi * t / self.tau)
            v1 = mod * (self.v0 + self.c1 * x1 + self.c2 * x2)
            v2 = mod * (-self.c1 * x2)
        else:
            mod = self.v0 * np.cos(np.pi * t / self.tau)
            v1 = -mod * np.sin(np.pi * x1) * np.cos(np.pi * x2)
            v2 = mod * np.cos(np.pi * x1) * np.sin(np.pi * x2)
        return np.stack([v1, v2], axis=-1)

    def eval_gradient(self, t: float, x) -> np.ndarray:
        """Jacobian d v_i / d x_j, shape (..., 2, 2)."""
        p = np.asarray(x, dtype=float)
        x1 = p[..., 0]
        x2 = p[..., 1]
        if self.variant in ("linear", "time_linear"):
            mod = 1.0 if self.variant == "linear" else np.cos(np.pi * t / self.tau)
            g = np.zeros(p.shape[:-1] + (2, 2))
            g[..., 0, 0] = mod * self.c1
            g[..., 0, 1] = mod * self.c2
            g[..., 1, 1] = -mod * self.c1
            return g
        mod = self.v0 * np.cos(np.pi * t / self.tau) * np.pi
        g = np.empty(p.shape[:-1] + (2, 2))
        g[..., 0, 0] = -mod * np.cos(np.pi * x1) * np.cos(np.pi * x2)
        g[..., 0, 1] = mod * np.sin(np.pi * x1) * np.sin(np.pi * x2)
        g[..., 1, 0] = -mod * np.sin(np.pi * x1) * np.sin(np.pi * x2)
        g[..., 1, 1] = mod * np.cos(np.pi * x1) * np.cos(np.pi * x2)
        return g

    # -- analytic bounds ----------------------------------------------------

    def sup_norm(self, xlim: tuple[float, float], ylim: tuple[float, float]) -> float:
        """Analytic sup of |v| over the box, taken over all times.

        The linear variants are affine in x, so |v| peaks at a box corner;
        the time modulation factor is bounded by one and attains it at t=0.
        The vortex magnitude is bounded by v0 and attains it on the box
        whenever the box meets a cell of the trigonometric pattern.
        """
        if self.variant == "vortex":
            return abs(self.v0)
        corners = np.array([(x, y) for x in xlim for y in ylim])
        if self.variant == "time_linear":
            probe = VelocityField("linear", self.v0, self.c1, self.c2)
        else:
            probe = self
        v = probe.eval(0.0, corners)
        return float(np.max(np.hypot(v[..., 0], v[..., 1])))


def linear_field(v0: float, c1: float, c2: float) -> VelocityField:
    return VelocityField("linear", v0=v0, c1=c1, c2=c2)


def vortex_field(v0: float, tau: float) -> VelocityField:
    return VelocityField("vortex", v0=v0, tau=tau)


def time_linear_field(v0: float, c1: float, c2: float, tau: float) -> VelocityField:
    return VelocityField("time_linear", v0=v0, c1=c1, c2=c2, tau=tau)
