"""Contact-state extraction from PLIC data, error norms and method tests.

The contact point is read directly off the wall-row PLIC element: the
reconstructed line is intersected with the wall, and the cell reports a
contact sample only when the intersection lies within its own wall
segment.  Steps where no wall cell qualifies are irregular samples; they
carry no position/angle and are excluded from the error norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DiagnosticsError, InvalidArgumentError
from .grid import Grid, ScalarField
from .reconstruction import PlicField

__all__ = [
    "ContactSample",
    "ErrorReport",
    "extract_contact_state",
    "error_norms",
    "l1_error",
    "convergence_order",
    "translation_test",
    "write_timeseries_csv",
    "write_summary_csv",
]


@dataclass(frozen=True)
class ContactSample:
    """One extracted contact state; irregular samples carry NaN data."""

    t: float
    x_cl: float
    theta: float  # radians
    cell_i: int
    regular: bool

    @staticmethod
    def irregular(t: float) -> "ContactSample":
        return ContactSample(t=t, x_cl=math.nan, theta=math.nan, cell_i=-1, regular=False)


@dataclass
class ErrorReport:
    """Per-mesh maximum-norm errors and fitted convergence orders."""

    n_values: list
    dx_over_r0: list
    e_theta_deg: list
    e_cl: list
    e1: list
    order_theta: float
    order_cl: float


def extract_contact_state(plic: PlicField, grid: Grid, side: str,
                          t: float = 0.0) -> ContactSample:
    """Contact point and angle for one side from the wall-row PLIC elements.

    The angle follows cos(theta) = -<n, n_wall> with n_wall = (0, -1) the
    outward wall normal, i.e. cos(theta) = n2; both interface orientations
    are covered.  If several wall cells qualify, the outermost one is
    reported (smallest i on the left side, largest on the right).
    """
    if side not in ("left", "right"):
        raise InvalidArgumentError(f"side {side!r} not 'left' or 'right'")
    g = grid.ghost_width
    wall_j = g
    mask = plic.mask[g:g + grid.nx, wall_j]
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return ContactSample.irregular(t)
    n1 = plic.n1[g + idx, wall_j]
    n2 = plic.n2[g + idx, wall_j]
    s = plic.offset[g + idx, wall_j]
    cx, cy = grid.cell_center(idx, 0)
    want = (n1 < 0.0) if side == "left" else (n1 > 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_hit = cx + (cy * n2 - s) / n1
    inside = want & np.isfinite(x_hit) & (np.abs(x_hit - cx) <= 0.5 * grid.dx1 * (1.0 + 1e-12))
    if not np.any(inside):
        return ContactSample.irregular(t)
    hits = np.nonzero(inside)[0]
    pick = hits[0] if side == "left" else hits[-1]
    theta = math.acos(min(max(float(n2[pick]), -1.0), 1.0))
    return ContactSample(t=t, x_cl=float(x_hit[pick]), theta=theta,
                         cell_i=int(idx[pick]), regular=True)


def error_norms(samples, ref, r0: float, window=(0.0, math.inf)):
    """Maximum-norm contact errors (E_theta in degrees, E_cl normalized by r0).

    ``ref`` maps a time array to (x_ref, theta_ref); only regular samples
    within the window enter the norms.
    """
    reg = [s for s in samples if s.regular and window[0] <= s.t <= window[1]]
    if not reg:
        raise DiagnosticsError("no regular contact samples in the window")
    ts = np.array([s.t for s in reg])
    x_num = np.array([s.x_cl for s in reg])
    th_num = np.array([s.theta for s in reg])
    x_ref, th_ref = ref(ts)
    e_theta = float(np.max(np.abs(np.degrees(th_num) - np.degrees(th_ref))))
    e_cl = float(np.max(np.abs(x_num - x_ref) / r0))
    return e_theta, e_cl


def l1_error(alpha_a: ScalarField, alpha_b: ScalarField, grid: Grid) -> float:
    """Discrete L1 difference, sum |a - b| * dx1 * dx2 over interior cells."""
    a = alpha_a.interior
    b = alpha_b.interior
    if a.shape != b.shape:
        raise InvalidArgumentError("fields live on different grids")
    return float(np.abs(a - b).sum()) * grid.cell_area


def convergence_order(pairs) -> float:
    """Least-squares slope of log(error) against log(dx).

    Non-positive errors are excluded with a warning; at least two usable
    points are required.
    """
    import warnings

    usable = [(dx, err) for dx, err in pairs if err > 0.0]
    if len(usable) < len(list(pairs)):
        warnings.warn("convergence_order: dropped non-positive error entries")
    if len(usable) < 2:
        raise DiagnosticsError("need at least two positive errors for an order fit")
    dx = np.log([p[0] for p in usable])
    err = np.log([p[1] for p in usable])
    slope, _ = np.polyfit(dx, err, 1)
    return float(slope)


# ---------------------------------------------------------------------------
# Translation test: a straight line of fixed inclination is slid across a
# cell and the reconstructed orientation compared against the exact one.
# ---------------------------------------------------------------------------


def _line_stencil(angle_rad: float, offset: float, shape, anchor, dx: float = 1.0):
    """Exact fractions of a line whose fluid normal is (cos a, sin a).

    ``anchor`` is the (i, j) index of the reconstructed cell inside the
    block; ``offset`` is the line's signed distance from that cell center.
    """
    from .geometry import rect_halfplane_fraction

    n1 = math.cos(angle_rad)
    n2 = math.sin(angle_rad)
    ni, nj = shape
    ai, aj = anchor
    ii, jj = np.meshgrid(np.arange(ni) - ai, np.arange(nj) - aj, indexing="ij")
    s = offset + (ii * dx) * n1 + (jj * dx) * n2
    return rect_halfplane_fraction(n1, n2, s, 0.5 * dx, 0.5 * dx), (n1, n2)


def translation_test(angle_deg: float, method: str, n_offsets: int = 200):
    """Reconstructed orientation per line offset for one method.

    A line whose normal is inclined ``angle_deg`` from the x1 axis is slid
    across a cell; "youngs" and "elvira" use a bulk cell, the boundary
    variants a wall cell.  Returns (offsets, reconstructed orientation in
    degrees); the exact answer is ``angle_deg`` everywhere.
    """
    from .reconstruction import (EPS_REC, boundary_elvira_normal, boundary_youngs_normal,
                                 elvira_normal, youngs_normal)

    if not (0.0 < angle_deg < 180.0):
        raise InvalidArgumentError("inclination must lie in (0, 180) degrees")
    methods = {
        "youngs": (youngs_normal, (3, 3), (1, 1)),
        "elvira": (elvira_normal, (3, 3), (1, 1)),
        "boundary-youngs": (boundary_youngs_normal, (3, 3), (1, 0)),
        "boundary-elvira": (boundary_elvira_normal, (5, 3), (2, 0)),
    }
    if method not in methods:
        raise InvalidArgumentError(f"unknown translation-test method {method!r}")
    func, shape, anchor = methods[method]
    ang = math.radians(angle_deg)
    nx1 = math.cos(ang)
    nx2 = math.sin(ang)
    half_diag = 0.5 * math.sqrt(2.0)
    margin = 1e-3  # keep the center fraction safely inside the interface band
    offsets = np.linspace(-half_diag + margin, half_diag - margin, n_offsets)
    out_off = []
    out_angle = []
    for off in offsets:
        frac, _exact = _line_stencil(ang, float(off), shape, anchor)
        ac = frac[anchor]
        if not (EPS_REC < ac < 1.0 - EPS_REC):
            continue
        n = func(frac, 1.0, 1.0)
        # signed angular deviation keeps the report continuous across 180
        signed = math.atan2(nx1 * n[1] - nx2 * n[0], nx1 * n[0] + nx2 * n[1])
        out_off.append(float(off))
        out_angle.append(angle_deg + math.degrees(signed))
    return np.array(out_off), np.array(out_angle)


# ---------------------------------------------------------------------------
# Delimited output
# ---------------------------------------------------------------------------


def write_timeseries_csv(path, samples, ref) -> None:
    """Per-sample rows: numerical and reference contact state."""
    with open(path, "w") as f:
        f.write("t,x_cl_num,theta_num_deg,x_cl_ref,theta_ref_deg,cell_i,regular\n")
        for s in samples:
            x_ref, th_ref = ref(np.asarray(s.t))
            x_num = f"{s.x_cl:.17g}" if s.regular else ""
            th_num = f"{math.degrees(s.theta):.17g}" if s.regular else ""
            f.write(f"{s.t:.17g},{x_num},{th_num},{float(x_ref):.17g},"
                    f"{math.degrees(float(th_ref)):.17g},{s.cell_i},{int(s.regular)}\n")


def write_summary_csv(path, report: ErrorReport, extra_key: str | None = None,
                      extra_values=None) -> None:
    """Mesh-sweep summary; an optional leading column tags e.g. a CFL study."""
    header = "N,dx_over_R0,E_theta_deg,E_cl,E1,order_theta,order_cl"
    if extra_key:
        header = f"{extra_key}," + header
    with open(path, "w") as f:
        f.write(header + "\n")
        for k in range(len(report.n_values)):
            e1 = report.e1[k]
            row = [
                str(report.n_values[k]),
                f"{report.dx_over_r0[k]:.17g}",
                f"{report.e_theta_deg[k]:.17g}" if np.isfinite(report.e_theta_deg[k]) else "",
                f"{report.e_cl[k]:.17g}" if np.isfinite(report.e_cl[k]) else "",
                f"{e1:.17g}" if (e1 is not None and np.isfinite(e1)) else "",
                f"{report.order_theta:.17g}" if np.isfinite(report.order_theta) else "",
                f"{report.order_cl:.17g}" if np.isfinite(report.order_cl) else "",
            ]
            if extra_key:
                row.insert(0, f"{extra_values[k]}")
            f.write(",".join(row) + "\n")
