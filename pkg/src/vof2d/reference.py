"""Reference solutions for contact-line position and contact angle.

Closed forms exist for (time-modulated) spatially linear fields; a
classical RK4 integrator covers arbitrary fields.  The contact angle is
evolved along wall trajectories via the rate ``d theta/dt = <J tau, n>``
with ``J`` the velocity Jacobian, ``tau`` the interface tangent at the
wall and ``n`` the interface normal, all parameterized by the angle:

  left contact point:   n = (-sin th, cos th),  tau = ( cos th, sin th)
  right contact point:  n = ( sin th, cos th),  tau = (-cos th, sin th)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .velocity import VelocityField

C1_EPS = 1e-12  # below this the c1 -> 0 limit branch is used

SIDES = ("left", "right")


def _check_side(side: str) -> float:
    if side not in SIDES:
        raise InvalidArgumentError(f"side must be 'left' or 'right', got {side!r}")
    return 1.0 if side == "right" else -1.0


def _check_theta(theta0: float) -> None:
    if not (0.0 < theta0 < math.pi):
        raise InvalidArgumentError(f"contact angle {theta0} outside (0, pi)")


def exact_contactline_linear(t, x10: float, v0: float, c1: float):
    """Wall abscissa under the linear field, x1' = v0 + c1*x1."""
    t = np.asarray(t, dtype=float)
    if abs(c1) < C1_EPS:
        return x10 + v0 * t
    em1 = np.expm1(c1 * t)
    return x10 * (em1 + 1.0) + (v0 / c1) * em1


def exact_theta_linear(t, theta0: float, c1: float, c2: float, side: str):
    """Contact angle under the linear field; '+' right / '-' left sign."""
    _check_theta(theta0)
    sgn = _check_side(side)
    t = np.asarray(t, dtype=float)
    cot0 = 1.0 / math.tan(theta0)
    if abs(c1) < C1_EPS:
        f = -cot0 + sgn * c2 * t
    else:
        e = np.exp(2.0 * c1 * t)
        f = -cot0 * e + sgn * c2 * (e - 1.0) / (2.0 * c1)
    return 0.5 * math.pi + np.arctan(f)


def modulation_time(t, tau: float):
    """Effective time s(t) = tau*sin(pi t/tau)/pi of the cosine modulation."""
    t = np.asarray(t, dtype=float)
    return tau * np.sin(np.pi * t / tau) / np.pi


def exact_time_dependent(t, x10: float, theta0: float, v0: float, c1: float,
                         c2: float, tau: float, side: str):
    """(abscissa, angle) under the cosine-modulated linear field.

    Substituting s(t) for t in the linear closed forms gives the exact
    solution; the evolution is periodic in t with period 2*tau.
    """
    s = modulation_time(t, tau)
    return (exact_contactline_linear(s, x10, v0, c1),
            exact_theta_linear(s, theta0, c1, c2, side))


def theta_rate(field: VelocityField, t: float, x1: float, theta: float, side: str) -> float:
    """Contact-angle rate <J tau, n> at a wall point, from the field Jacobian."""
    sgn = _check_side(side)
    j = field.eval_gradient(t, np.array([x1, 0.0]))
    st = math.sin(theta)
    ct = math.cos(theta)
    n = np.array([sgn * st, ct])
    tau_vec = np.array([-sgn * ct, st])
    return float(n @ (j @ tau_vec))


@dataclass
class ContactTrajectory:
    """Sampled wall trajectory (x_cl, theta) with cubic dense output."""

    times: np.ndarray
    x_cl: np.ndarray
    theta: np.ndarray
    side: str
    truncated: bool = False
    derivs: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if np.any((self.theta <= 0.0) | (self.theta >= math.pi)):
            raise InvalidArgumentError("trajectory leaves the partial wetting range (0, pi)")

    def __call__(self, t):
        return self.interp(t)

    def interp(self, t):
        """Cubic Hermite interpolation of (x_cl, theta) at times t."""
        t = np.asarray(t, dtype=float)
        ts = self.times
        if self.derivs is None:
            x = np.interp(t, ts, self.x_cl)
            th = np.interp(t, ts, self.theta)
            return x, th
        idx = np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2)
        h = ts[idx + 1] - ts[idx]
        u = np.clip((t - ts[idx]) / h, 0.0, 1.0)
        h00 = (1 + 2 * u) * (1 - u) ** 2
        h10 = u * (1 - u) ** 2
        h01 = u**2 * (3 - 2 * u)
        h11 = u**2 * (u - 1)
        out = []
        for k, vals in enumerate((self.x_cl, self.theta)):
            d = self.derivs[:, k]
            out.append(h00 * vals[idx] + h10 * h * d[idx]
                       + h01 * vals[idx + 1] + h11 * h * d[idx + 1])
        return out[0], out[1]

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("t,x_cl,theta_deg\n")
            for t, x, th in zip(self.times, self.x_cl, self.theta):
                f.write(f"{t:.17g},{x:.17g},{math.degrees(th):.17g}\n")


def ode_reference(field: VelocityField, x10: float, theta0: float, side: str,
                  t_end: float, dt_ode: float) -> ContactTrajectory:
    """Classical RK4 on the coupled (x1, theta) system restricted to the wall.

    The wall is invariant for the flow, so x2 stays 0 identically.  If the
    angle leaves (0, pi) the trajectory is truncated at the last valid node.
    """
    _check_theta(theta0)
    _check_side(side)
    if t_end < 0.0 or dt_ode <= 0.0:
        raise InvalidArgumentError("need t_end >= 0 and dt_ode > 0")

    def rhs(t, y):
        x1, th = y
        v = field.eval(t, np.array([x1, 0.0]))
        return np.array([float(v[0]), theta_rate(field, t, x1, th, side)])

    nsteps = max(int(math.ceil(t_end / dt_ode - 1e-12)), 0) if t_end > 0 else 0
    dt = t_end / nsteps if nsteps else 0.0
    ts = [0.0]
    ys = [np.array([x10, theta0])]
    ds = [rhs(0.0, ys[0])]
    truncated = False
    for k in range(nsteps):
        t = k * dt
        y = ys[-1]
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = rhs(t + dt, y + dt * k3)
        ynew = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not (0.0 < ynew[1] < math.pi):
            truncated = True
            break
        ts.append(t + dt)
        ys.append(ynew)
        ds.append(rhs(t + dt, ynew))
    ys_arr = np.array(ys)
    return ContactTrajectory(
        times=np.array(ts),
        x_cl=ys_arr[:, 0],
        theta=ys_arr[:, 1],
        side=side,
        truncated=truncated,
        derivs=np.array(ds),
    )
