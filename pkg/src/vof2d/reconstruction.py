"""PLIC interface reconstruction: Youngs and ELVIRA, plus wall-row variants.

The wall-row variants replace the one-sided information that a 3x3
stencil cannot provide at the boundary: the gradient method switches to
weighted second-order forward differences normal to the wall, and the
least-squares method widens its stencil to 5x3 and enumerates candidate
slopes from one-sided column and row sums (16 candidates in total).

Stencil arrays are indexed [i, j] with axis 0 along x1 and axis 1 along
x2, matching the field storage; boundary stencils are anchored with
j = 0 at the wall row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGradientError, InvalidArgumentError
from .geometry import HalfPlane, _fraction_below, _invert_fraction
from .grid import Grid, ScalarField

EPS_REC = 1e-6  # interface detection threshold on the volume fraction
GRAD_EPS = 1e-12  # below this a discrete gradient is degenerate

__all__ = [
    "EPS_REC",
    "PlicElement",
    "PlicField",
    "youngs_normal",
    "elvira_normal",
    "boundary_youngs_normal",
    "boundary_elvira_normal",
    "reconstruct",
]


@dataclass(frozen=True)
class PlicElement:
    """Reconstructed linear interface of one cell."""

    i: int
    j: int
    normal: tuple[float, float]
    halfplane: HalfPlane
    alpha: float


class PlicField:
    """Per-cell PLIC data stored as padded arrays aligned with the grid."""

    def __init__(self, grid: Grid, mask: np.ndarray, n1: np.ndarray, n2: np.ndarray,
                 offset: np.ndarray, alpha: np.ndarray, eps: float = EPS_REC,
                 fallback_count: int = 0):
        self.grid = grid
        self.mask = mask
        self.n1 = n1
        self.n2 = n2
        self.offset = offset
        self.alpha = alpha
        self.eps = eps
        self.fallback_count = fallback_count

    def __len__(self) -> int:
        return int(self.mask.sum())

    def get(self, i: int, j: int) -> PlicElement | None:
        """Element of interior cell (i, j), or None where no interface."""
        g = self.grid.ghost_width
        ip, jp = i + g, j + g
        if not self.mask[ip, jp]:
            return None
        center = self.grid.cell_center(i, j)
        n = (float(self.n1[ip, jp]), float(self.n2[ip, jp]))
        return PlicElement(i, j, n,
                           HalfPlane(n, float(self.offset[ip, jp]), anchor=center),
                           float(self.alpha[ip, jp]))

    def elements(self):
        g = self.grid.ghost_width
        for ip, jp in zip(*np.nonzero(self.mask)):
            yield self.get(int(ip) - g, int(jp) - g)

    def dump_text(self, path) -> None:
        """One line per interface cell: "i j n1 n2 offset alpha"."""
        with open(path, "w") as f:
            for el in self.elements():
                f.write(f"{el.i} {el.j} {el.normal[0]:.17g} {el.normal[1]:.17g} "
                        f"{el.halfplane.offset:.17g} {el.alpha:.17g}\n")


# ---------------------------------------------------------------------------
# Gradient (Youngs-type) normals
# ---------------------------------------------------------------------------


def _youngs_gradient(a: np.ndarray, i, j, dx1: float, dx2: float):
    """Weighted central differences on a 3x3 block (weights 1/2, 1/4, 1/4)."""
    g1 = (0.5 * (a[i + 1, j] - a[i - 1, j])
          + 0.25 * (a[i + 1, j + 1] - a[i - 1, j + 1])
          + 0.25 * (a[i + 1, j - 1] - a[i - 1, j - 1])) / (2.0 * dx1)
    g2 = (0.5 * (a[i, j + 1] - a[i, j - 1])
          + 0.25 * (a[i + 1, j + 1] - a[i + 1, j - 1])
          + 0.25 * (a[i - 1, j + 1] - a[i - 1, j - 1])) / (2.0 * dx2)
    return g1, g2


def _boundary_youngs_gradient(a: np.ndarray, i, j, dx1: float, dx2: float):
    """Wall-row gradient: tangential central, weighted forward normal."""
    g1 = (a[i + 1, j] - a[i - 1, j]) / (2.0 * dx1)

    def fwd(col):
        return -a[col, j + 2] + 4.0 * a[col, j + 1] - 3.0 * a[col, j]

    g2 = (fwd(i) / (4.0 * dx2)
          + fwd(i + 1) / (8.0 * dx2)
          + fwd(i - 1) / (8.0 * dx2))
    return g1, g2


def _normalize_gradient(g1, g2):
    mag = np.hypot(g1, g2)
    degen = mag <= GRAD_EPS
    safe = np.where(degen, 1.0, mag)
    return -g1 / safe, -g2 / safe, degen


def _check_stencil(stencil, shape) -> np.ndarray:
    a = np.asarray(stencil, dtype=float)
    if a.shape != shape:
        raise InvalidArgumentError(f"stencil shape {a.shape}, expected {shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError("stencil contains non-finite values")
    return a


def youngs_normal(stencil, dx1: float, dx2: float) -> np.ndarray:
    """Interface normal from the negative Youngs gradient of a 3x3 block."""
    a = _check_stencil(stencil, (3, 3))
    g1, g2 = _youngs_gradient(a, 1, 1, dx1, dx2)
    n1, n2, degen = _normalize_gradient(np.asarray(g1), np.asarray(g2))
    if degen:
        raise DegenerateGradientError("Youngs gradient below threshold", cell=None)
    return np.array([float(n1), float(n2)])


def boundary_youngs_normal(stencil, dx1: float, dx2: float) -> np.ndarray:
    """Wall-row Youngs normal; stencil is 3x3 with j = 0 at the wall."""
    a = _check_stencil(stencil, (3, 3))
    g1, g2 = _boundary_youngs_gradient(a, 1, 0, dx1, dx2)
    n1, n2, degen = _normalize_gradient(np.asarray(g1), np.asarray(g2))
    if degen:
        raise DegenerateGradientError("Boundary Youngs gradient below threshold", cell=None)
    return np.array([float(n1), float(n2)])


# ---------------------------------------------------------------------------
# ELVIRA-type candidate minimization
# ---------------------------------------------------------------------------


def _best_candidate(a: np.ndarray, i, j, candidates, k_range, l_range,
                    dx1: float, dx2: float):
    """Pick, per cell, the candidate normal minimizing the squared deviation
    of induced fractions over the stencil block.

    ``candidates`` is an ordered list of (n1, n2) arrays; ties keep the
    earliest candidate.  Each candidate is positioned to match the center
    fraction exactly, then extended across the block by shifting its
    offset with the cell-center displacement.
    """
    hx = 0.5 * dx1
    hy = 0.5 * dx2
    alpha_c = a[i, j]
    best_f = None
    best = None
    for n1, n2 in candidates:
        aa = np.abs(n1) * hx
        bb = np.abs(n2) * hy
        s = -_invert_fraction(alpha_c, aa, bb)
        f = np.zeros(np.shape(alpha_c))
        for k in k_range:
            for l in l_range:
                if k == 0 and l == 0:
                    continue  # center matches by construction
                s_kl = s + k * dx1 * n1 + l * dx2 * n2
                frac = _fraction_below(-s_kl, aa, bb)
                f = f + (frac - a[i + k, j + l]) ** 2
        if best_f is None:
            best_f = f
            best = (np.broadcast_to(n1, f.shape).copy(),
                    np.broadcast_to(n2, f.shape).copy(),
                    np.broadcast_to(s, f.shape).copy())
        else:
            better = f < best_f
            best_f = np.where(better, f, best_f)
            best = (np.where(better, n1, best[0]),
                    np.where(better, n2, best[1]),
                    np.where(better, s, best[2]))
    return best


def _slope_candidates(slopes, transposed: bool):
    """Both normal orientations for each finite-difference slope estimate.

    With the fluid on the flipped side, column (row) sums measure the
    complementary heights (widths), so the estimate carries the opposite
    sign of the geometric slope; trying the estimate with both signs of
    the cross component covers both fluid orientations exactly.  Family
    x2 = m*x1 + b yields (-m, +-1)/sqrt(1+m^2), the transposed family
    x1 = m*x2 + b yields (+-1, -m)/sqrt(1+m^2).
    """
    out = []
    for m in slopes:
        r = np.sqrt(1.0 + m * m)
        if transposed:
            out.append((1.0 / r, -m / r))
            out.append((-1.0 / r, -m / r))
        else:
            out.append((-m / r, 1.0 / r))
            out.append((-m / r, -1.0 / r))
    return out


def _elvira_candidates(a: np.ndarray, i, j, dx1: float, dx2: float):
    """The 12 bulk candidates: backward/central/forward differences of
    3-cell column sums, both graph orientations, both normal signs."""
    col = {}
    row = {}
    for off in (-1, 0, 1):
        col[off] = a[i + off, j - 1] + a[i + off, j] + a[i + off, j + 1]
        row[off] = a[i - 1, j + off] + a[i, j + off] + a[i + 1, j + off]
    r12 = dx2 / dx1
    r21 = dx1 / dx2
    m1 = [r12 * (col[0] - col[-1]),          # backward
          0.5 * r12 * (col[1] - col[-1]),    # central
          r12 * (col[1] - col[0])]           # forward
    m2 = [r21 * (row[0] - row[-1]),
          0.5 * r21 * (row[1] - row[-1]),
          r21 * (row[1] - row[0])]
    return _slope_candidates(m1, transposed=False) + _slope_candidates(m2, transposed=True)


def _boundary_elvira_candidates(a: np.ndarray, i, j, dx1: float, dx2: float):
    """The 16 wall-row candidates from one-sided sums on the 5x3 stencil."""
    col = {}
    for off in (-2, -1, 0, 1, 2):
        col[off] = a[i + off, j] + a[i + off, j + 1] + a[i + off, j + 2]
    row = {}
    for off in (0, 1, 2):
        row[off] = (a[i - 2, j + off] + a[i - 1, j + off] + a[i, j + off]
                    + a[i + 1, j + off] + a[i + 2, j + off])
    r12 = dx2 / dx1
    r21 = dx1 / dx2
    m1 = [0.5 * r12 * (col[1] - col[-1]),    # central
          r12 * (col[0] - col[-1]),          # backward
          r12 * (col[-1] - col[-2]),         # far backward
          r12 * (col[1] - col[0]),           # forward
          r12 * (col[2] - col[1])]           # far forward
    m2 = [r21 * (row[1] - row[0]),           # forward
          0.5 * r21 * (row[2] - row[0]),     # centered forward
          r21 * (row[2] - row[1])]           # far forward
    return _slope_candidates(m1, transposed=False) + _slope_candidates(m2, transposed=True)


def _require_interface(alpha_c, eps: float = EPS_REC) -> None:
    if not (eps < alpha_c < 1.0 - eps):
        raise InvalidArgumentError(
            f"center fraction {alpha_c} is not an interface cell (eps = {eps})")


def elvira_normal(stencil, dx1: float, dx2: float) -> np.ndarray:
    """ELVIRA normal of the center cell of a 3x3 block."""
    a = _check_stencil(stencil, (3, 3))
    _require_interface(a[1, 1])
    cands = _elvira_candidates(a, 1, 1, dx1, dx2)
    n1, n2, _s = _best_candidate(a, 1, 1, cands, (-1, 0, 1), (-1, 0, 1), dx1, dx2)
    return np.array([float(n1), float(n2)])


def boundary_elvira_normal(stencil, dx1: float, dx2: float) -> np.ndarray:
    """Boundary ELVIRA normal of the wall cell of a 5x3 block (j = 0 at wall)."""
    a = _check_stencil(stencil, (5, 3))
    _require_interface(a[2, 0])
    cands = _boundary_elvira_candidates(a, 2, 0, dx1, dx2)
    n1, n2, _s = _best_candidate(a, 2, 0, cands, (-2, -1, 0, 1, 2), (0, 1, 2), dx1, dx2)
    return np.array([float(n1), float(n2)])


# ---------------------------------------------------------------------------
# Field-level reconstruction
# ---------------------------------------------------------------------------


def reconstruct(alpha: ScalarField, grid: Grid, method: str = "elvira",
                prev: "PlicField | None" = None, strict: bool = False) -> PlicField:
    """Reconstruct a PLIC element in every interface cell.

    Bulk rows use the configured method; the wall row j = 0 uses the
    matching boundary variant.  Ghost layers of ``alpha`` must be filled.
    Degenerate gradients fall back to the previous step's normal for that
    cell, or to the wall normal (0, 1); with ``strict`` they raise instead,
    carrying the first offending cell index.
    """
    if method not in ("youngs", "elvira"):
        raise InvalidArgumentError(f"unknown reconstruction method {method!r}")
    g = grid.ghost_width
    a = alpha.values
    mask = np.zeros(grid.shape, dtype=bool)
    ii, jj = grid.interior
    interior = a[ii, jj]
    mask[ii, jj] = (interior > EPS_REC) & (interior < 1.0 - EPS_REC)
    n1 = np.full(grid.shape, np.nan)
    n2 = np.full(grid.shape, np.nan)
    off = np.full(grid.shape, np.nan)
    fallback = 0

    ip_all, jp_all = np.nonzero(mask)
    if ip_all.size and grid.ny < 3:
        raise InvalidArgumentError("reconstruction needs at least 3 cell rows")
    wall = jp_all == g
    groups = ((ip_all[~wall], jp_all[~wall], False), (ip_all[wall], jp_all[wall], True))
    for i_idx, j_idx, at_wall in groups:
        if i_idx.size == 0:
            continue
        if method == "youngs":
            grad = _boundary_youngs_gradient if at_wall else _youngs_gradient
            g1, g2 = grad(a, i_idx, j_idx, grid.dx1, grid.dx2)
            c1, c2, degen = _normalize_gradient(g1, g2)
            if np.any(degen):
                if strict:
                    k = int(np.nonzero(degen)[0][0])
                    cell = (int(i_idx[k]) - g, int(j_idx[k]) - g)
                    raise DegenerateGradientError(
                        f"degenerate gradient in cell {cell}", cell=cell)
                fb1 = np.zeros(i_idx.shape)
                fb2 = np.ones(i_idx.shape)
                if prev is not None:
                    has_prev = prev.mask[i_idx, j_idx]
                    fb1 = np.where(has_prev, prev.n1[i_idx, j_idx], fb1)
                    fb2 = np.where(has_prev, prev.n2[i_idx, j_idx], fb2)
                c1 = np.where(degen, fb1, c1)
                c2 = np.where(degen, fb2, c2)
                fallback += int(degen.sum())
        else:
            if at_wall:
                cands = _boundary_elvira_candidates(a, i_idx, j_idx, grid.dx1, grid.dx2)
                c1, c2, _ = _best_candidate(a, i_idx, j_idx, cands,
                                            (-2, -1, 0, 1, 2), (0, 1, 2),
                                            grid.dx1, grid.dx2)
            else:
                cands = _elvira_candidates(a, i_idx, j_idx, grid.dx1, grid.dx2)
                c1, c2, _ = _best_candidate(a, i_idx, j_idx, cands,
                                            (-1, 0, 1), (-1, 0, 1),
                                            grid.dx1, grid.dx2)
        aa = np.abs(c1) * 0.5 * grid.dx1
        bb = np.abs(c2) * 0.5 * grid.dx2
        s = -_invert_fraction(a[i_idx, j_idx], aa, bb)
        n1[i_idx, j_idx] = c1
        n2[i_idx, j_idx] = c2
        off[i_idx, j_idx] = s

    return PlicField(grid, mask, n1, n2, off, a.copy(), fallback_count=fallback)
