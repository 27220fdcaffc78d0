"""Structured equidistant grid, volume-fraction field and staggered face data.

Arrays are stored ghost padded with shape (nx + 2g, ny + 2g); axis 0 runs
along x1, axis 1 along x2.  Interior cell (i, j) maps to padded index
(i + g, j + g).  The solid wall is the bottom boundary x2 = 0 and j = 0 is
the wall cell row; the remaining boundaries are artificial inflow/outflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DOMAIN, CaseConfig
from .errors import ConfigError, InvalidArgumentError
from .geometry import Rect, disk_rect_fractions
from .velocity import VelocityField

INIT_TOL = 1e-9  # per-cell disk-fraction tolerance used at initialization


@dataclass(frozen=True)
class Grid:
    nx: int
    ny: int
    dx1: float
    dx2: float
    origin: tuple[float, float] = (0.0, 0.0)
    ghost_width: int = 2

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ConfigError("grid needs at least one cell per direction")
        if not (self.dx1 > 0.0 and self.dx2 > 0.0):
            raise ConfigError("mesh widths must be positive")
        if self.ghost_width < 2:
            raise ConfigError("ghost_width >= 2 required by the boundary stencils")

    @property
    def shape(self) -> tuple[int, int]:
        g = self.ghost_width
        return (self.nx + 2 * g, self.ny + 2 * g)

    @property
    def cell_area(self) -> float:
        return self.dx1 * self.dx2

    @property
    def interior(self) -> tuple[slice, slice]:
        g = self.ghost_width
        return (slice(g, g + self.nx), slice(g, g + self.ny))

    def cell_rect(self, i: int, j: int) -> Rect:
        """Interior cell (i, j) as a rectangle; indices are 0 based."""
        ox, oy = self.origin
        return Rect(ox + i * self.dx1, oy + j * self.dx2,
                    ox + (i + 1) * self.dx1, oy + (j + 1) * self.dx2)

    def cell_center(self, i, j):
        ox, oy = self.origin
        return (ox + (np.asarray(i) + 0.5) * self.dx1,
                oy + (np.asarray(j) + 0.5) * self.dx2)

    def x_face_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Centroids of vertical faces, shapes (nx+1, ny)."""
        ox, oy = self.origin
        x = ox + np.arange(self.nx + 1) * self.dx1
        y = oy + (np.arange(self.ny) + 0.5) * self.dx2
        return np.meshgrid(x, y, indexing="ij")

    def y_face_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Centroids of horizontal faces, shapes (nx, ny+1)."""
        ox, oy = self.origin
        x = ox + (np.arange(self.nx) + 0.5) * self.dx1
        y = oy + np.arange(self.ny + 1) * self.dx2
        return np.meshgrid(x, y, indexing="ij")


def build_grid(config: CaseConfig) -> Grid:
    """Equidistant N x N/4 grid over the fixed domain [0,1] x [0,0.25]."""
    n = config.n
    if n < 4 or n % 4 != 0:
        raise ConfigError(f"N = {n} must be a positive multiple of 4")
    (x0, x1), (y0, _y1) = DOMAIN
    dx = (x1 - x0) / n
    return Grid(nx=n, ny=n // 4, dx1=dx, dx2=dx, origin=(x0, y0))


class ScalarField:
    """Cell-centered volume fractions on a grid, ghost cells included."""

    def __init__(self, grid: Grid, values: np.ndarray | None = None):
        self.grid = grid
        if values is None:
            values = np.zeros(grid.shape)
        if values.shape != grid.shape:
            raise InvalidArgumentError(
                f"field shape {values.shape} does not match grid {grid.shape}")
        self.values = values

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.grid.interior]

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())

    def total_fluid_area(self) -> float:
        return float(self.interior.sum()) * self.grid.cell_area

    def dump_text(self, path) -> None:
        """Plain-text matrix of interior values, one grid row per line,
        bottom row first, 17 significant digits."""
        interior = self.interior
        with open(path, "w") as f:
            for j in range(self.grid.ny):
                f.write(" ".join(f"{v:.17g}" for v in interior[:, j]))
                f.write("\n")


@dataclass
class FaceVelocityField:
    """Point-sampled velocity components at staggered face centroids.

    u holds v1 at vertical faces, shape (nx+1, ny); w holds v2 at
    horizontal faces, shape (nx, ny+1).  Wall faces carry w = 0 exactly.
    """

    u: np.ndarray
    w: np.ndarray

    def max_speed(self) -> float:
        return max(float(np.max(np.abs(self.u))), float(np.max(np.abs(self.w))))


def init_volume_fractions(grid: Grid, cap_center, r0: float,
                          tol: float = INIT_TOL) -> ScalarField:
    """Volume fractions of the disk cap above the wall, cell by cell.

    Only cells within an inflated bounding box of the disk are evaluated;
    everything else is exactly full or empty by the distance bounds.
    """
    if not r0 > 0.0:
        raise InvalidArgumentError("cap radius must be positive")
    field = ScalarField(grid)
    ox, oy = grid.origin
    cx, cy = float(cap_center[0]), float(cap_center[1])
    pad = 2.0 * max(grid.dx1, grid.dx2)
    i_lo = max(int(np.floor((cx - r0 - pad - ox) / grid.dx1)), 0)
    i_hi = min(int(np.ceil((cx + r0 + pad - ox) / grid.dx1)), grid.nx)
    j_lo = max(int(np.floor((cy - r0 - pad - oy) / grid.dx2)), 0)
    j_hi = min(int(np.ceil((cy + r0 + pad - oy) / grid.dx2)), grid.ny)
    if i_lo >= i_hi or j_lo >= j_hi:
        return field
    ii, jj = np.meshgrid(np.arange(i_lo, i_hi), np.arange(j_lo, j_hi), indexing="ij")
    x0 = ox + ii.ravel() * grid.dx1
    y0 = oy + jj.ravel() * grid.dx2
    frac = disk_rect_fractions((cx, cy), r0, x0, y0, grid.dx1, grid.dx2, tol=tol)
    g = grid.ghost_width
    field.values[g + i_lo:g + i_hi, g + j_lo:g + j_hi] = frac.reshape(i_hi - i_lo, j_hi - j_lo)
    np.clip(field.values, 0.0, 1.0, out=field.values)
    return field


def apply_ghost_bc(alpha: ScalarField, grid: Grid, t: float = 0.0,
                   field: VelocityField | None = None) -> ScalarField:
    """Fill ghost layers by constant continuation of the nearest interior cell.

    Implements the homogeneous Neumann condition on artificial boundaries
    and the wall; the velocity arguments are accepted for interface
    symmetry but the fill rule does not depend on them.  Idempotent.
    """
    g = grid.ghost_width
    a = alpha.values
    nx, ny = grid.nx, grid.ny
    a[:g, :] = a[g:g + 1, :]
    a[g + nx:, :] = a[g + nx - 1:g + nx, :]
    a[:, :g] = a[:, g:g + 1]
    a[:, g + ny:] = a[:, g + ny - 1:g + ny]
    return alpha


def sample_face_velocities(grid: Grid, field: VelocityField, t: float) -> FaceVelocityField:
    """Point evaluation of v1 (v2) at vertical (horizontal) face centroids.

    Wall faces at x2 = 0 are zeroed exactly; the catalog fields are
    tangential there analytically, this removes the last-ulp residue.
    """
    xu, yu = grid.x_face_points()
    pu = np.stack([xu, yu], axis=-1)
    u = field.eval(t, pu)[..., 0]
    xw, yw = grid.y_face_points()
    pw = np.stack([xw, yw], axis=-1)
    w = field.eval(t, pw)[..., 1]
    if abs(grid.origin[1]) == 0.0:
        w[:, 0] = 0.0
    return FaceVelocityField(u=u, w=w)
