"""Exact 2D geometric kernels.

Half-plane cuts of axis-aligned rectangles (area fractions and their
inversion for interface positioning), convex polygon clipping, and
disk/rectangle area fractions for initialization.

Conventions: a half-plane is stored as a unit normal ``n``, a signed
offset ``s`` and an anchor point, with the fluid side given by
``{x : (x - anchor) . n + s <= 0}``.  For interface elements the anchor
is the owning cell's center, so ``s = +half_diagonal`` is always empty
and ``s = -half_diagonal`` always full, independent of cell position.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "Rect",
    "HalfPlane",
    "ConvexPolygon",
    "area_fraction_halfplane",
    "position_plic",
    "clip_polygon_halfplane",
    "circle_cell_fraction",
    "disk_rect_fractions",
]


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [xmin, xmax] x [ymin, ymax]."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))

    @property
    def half_widths(self) -> tuple[float, float]:
        return (0.5 * self.width, 0.5 * self.height)

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def diagonal(self) -> float:
        return float(np.hypot(self.width, self.height))

    def corners(self) -> np.ndarray:
        """Counterclockwise corner list, starting at (xmin, ymin)."""
        return np.array(
            [
                [self.xmin, self.ymin],
                [self.xmax, self.ymin],
                [self.xmax, self.ymax],
                [self.xmin, self.ymax],
            ]
        )


def _unit_normal(normal) -> np.ndarray:
    n = np.asarray(normal, dtype=float).reshape(2)
    if not np.all(np.isfinite(n)):
        raise InvalidArgumentError(f"non-finite normal {normal!r}")
    mag = float(np.hypot(n[0], n[1]))
    if mag < 1e-12:
        raise InvalidArgumentError(f"degenerate normal {normal!r}")
    if abs(mag - 1.0) > 1e-6:
        raise InvalidArgumentError(f"normal {normal!r} is not a unit vector")
    return n / mag


@dataclass(frozen=True)
class HalfPlane:
    """Oriented line; fluid occupies {x : (x - anchor) . normal + offset <= 0}."""

    normal: tuple[float, float]
    offset: float
    anchor: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        n = _unit_normal(self.normal)
        object.__setattr__(self, "normal", (float(n[0]), float(n[1])))
        if not np.isfinite(self.offset):
            raise InvalidArgumentError("non-finite half-plane offset")

    def signed_distance(self, points) -> np.ndarray:
        """Positive outside the fluid, negative inside."""
        p = np.asarray(points, dtype=float)
        n1, n2 = self.normal
        ax, ay = self.anchor
        return (p[..., 0] - ax) * n1 + (p[..., 1] - ay) * n2 + self.offset


# ---------------------------------------------------------------------------
# Rectangle / half-plane area fraction, closed form.
#
# With the rectangle centered at the evaluation anchor, the linear form
# (x - c) . n is distributed like the sum of two independent uniform
# variables on [-a, a] and [-b, b] with a = |n1|*hx and b = |n2|*hy.
# The fluid fraction is the trapezoidal CDF of that sum, a piecewise
# quadratic that is inverted analytically for PLIC positioning.
# ---------------------------------------------------------------------------


def _fraction_below(d, a, b):
    """CDF at d of U[-a,a] + U[-b,b]; a, b >= 0, not both zero. Vectorized."""
    d = np.asarray(d, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    total = a + b
    mid = hi - lo
    with np.errstate(divide="ignore", invalid="ignore"):
        lo_hi8 = 8.0 * lo * hi
        ramp_lo = np.where(lo_hi8 > 0.0, (d + total) ** 2 / np.where(lo_hi8 > 0.0, lo_hi8, 1.0), 0.0)
        ramp_hi = np.where(lo_hi8 > 0.0, 1.0 - (total - d) ** 2 / np.where(lo_hi8 > 0.0, lo_hi8, 1.0), 1.0)
        linear = 0.5 + d / np.where(hi > 0.0, 2.0 * hi, 1.0)
    out = np.where(d <= -mid, ramp_lo, np.where(d < mid, linear, ramp_hi))
    out = np.where(d <= -total, 0.0, out)
    out = np.where(d >= total, 1.0, out)
    return np.clip(out, 0.0, 1.0)


def _invert_fraction(alpha, a, b):
    """Inverse of _fraction_below in d for alpha in (0, 1). Vectorized."""
    alpha = np.asarray(alpha, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    total = a + b
    q = np.minimum(alpha, 1.0 - alpha)
    q = np.clip(q, 0.0, 0.5)
    with np.errstate(divide="ignore", invalid="ignore"):
        thresh = np.where(hi > 0.0, lo / (2.0 * hi), 0.0)
        d_ramp = -total + np.sqrt(np.maximum(8.0 * lo * hi * q, 0.0))
        d_lin = (q - 0.5) * 2.0 * hi
    d = np.where((q < thresh) & (lo > 0.0), d_ramp, d_lin)
    return np.where(alpha > 0.5, -d, d)


def rect_halfplane_fraction(n1, n2, s, hx, hy):
    """Fluid fraction of a rectangle with half-widths (hx, hy), offset s
    measured from the rectangle center. Vectorized, no validation."""
    return _fraction_below(-np.asarray(s, dtype=float), np.abs(n1) * hx, np.abs(n2) * hy)


def area_fraction_halfplane(h: HalfPlane, cell: Rect) -> float:
    """Fraction of ``cell`` covered by the fluid side of ``h``."""
    hx, hy = cell.half_widths
    if not (hx > 0.0 and hy > 0.0):
        raise InvalidArgumentError("cell must have positive side lengths")
    if not np.isfinite(cell.xmin + cell.ymin + cell.xmax + cell.ymax):
        raise InvalidArgumentError("non-finite cell")
    n1, n2 = h.normal
    cx, cy = cell.center
    ax, ay = h.anchor
    s_eff = h.offset + (cx - ax) * n1 + (cy - ay) * n2
    return float(rect_halfplane_fraction(n1, n2, s_eff, hx, hy))


def position_plic(normal, target_alpha: float, cell: Rect) -> HalfPlane:
    """Place a line of the given orientation so the cell fraction matches.

    The offset is anchored at the cell center; empty and full targets map
    to +/- half of the cell diagonal so the bracket is position free.
    """
    n = _unit_normal(normal)
    if not np.isfinite(target_alpha):
        raise InvalidArgumentError("non-finite target fraction")
    if target_alpha < -1e-12 or target_alpha > 1.0 + 1e-12:
        raise InvalidArgumentError(f"target fraction {target_alpha} outside [0, 1]")
    alpha = min(max(float(target_alpha), 0.0), 1.0)
    hx, hy = cell.half_widths
    if not (hx > 0.0 and hy > 0.0):
        raise InvalidArgumentError("cell must have positive side lengths")
    half_diag = 0.5 * cell.diagonal
    if alpha <= 0.0:
        s = half_diag
    elif alpha >= 1.0:
        s = -half_diag
    else:
        a = abs(n[0]) * hx
        b = abs(n[1]) * hy
        s = -float(_invert_fraction(alpha, a, b))
    return HalfPlane((float(n[0]), float(n[1])), float(s), anchor=cell.center)


# ---------------------------------------------------------------------------
# Convex polygon clipping (used by tests as an independent area route and
# available to callers that need explicit flux polygons).
# ---------------------------------------------------------------------------


class ConvexPolygon:
    """Convex polygon with counterclockwise vertices; may be empty."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float).reshape(-1, 2)
        self.vertices = v

    @classmethod
    def from_rect(cls, cell: Rect) -> "ConvexPolygon":
        return cls(cell.corners())

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) < 3

    def area(self) -> float:
        if self.is_empty:
            return 0.0
        x = self.vertices[:, 0]
        y = self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def clip_polygon_halfplane(poly: ConvexPolygon, h: HalfPlane) -> ConvexPolygon:
    """Clip a convex polygon against the fluid side of a half-plane."""
    verts = poly.vertices
    if len(verts) == 0:
        return ConvexPolygon(np.empty((0, 2)))
    phi = h.signed_distance(verts)
    scale = max(float(np.max(np.abs(verts))), 1.0)
    out = []
    m = len(verts)
    for k in range(m):
        p, q = verts[k], verts[(k + 1) % m]
        fp, fq = phi[k], phi[(k + 1) % m]
        if fp <= 0.0:
            out.append(p)
        if (fp < 0.0 < fq) or (fq < 0.0 < fp):
            t = fp / (fp - fq)
            out.append(p + t * (q - p))
    if not out:
        return ConvexPolygon(np.empty((0, 2)))
    cleaned = [out[0]]
    for v in out[1:]:
        if np.max(np.abs(v - cleaned[-1])) > 1e-14 * scale:
            cleaned.append(v)
    if len(cleaned) > 1 and np.max(np.abs(cleaned[0] - cleaned[-1])) <= 1e-14 * scale:
        cleaned.pop()
    return ConvexPolygon(np.array(cleaned))


# ---------------------------------------------------------------------------
# Disk / rectangle fraction by adaptive quadtree subdivision.
#
# Squares fully inside or outside the disk are resolved by distance
# bounds; remaining leaves use the tangent half-plane of the signed
# distance function, whose area error per leaf is O(w^3 / R).
# ---------------------------------------------------------------------------


def disk_rect_fractions(center, radius: float, x0, y0, w, h, tol: float = 1e-12,
                        max_depth: int = 20) -> np.ndarray:
    """Area fractions of many rectangles against one disk, vectorized.

    Rectangles are given by lower-left corners (x0, y0) and sizes (w, h),
    all broadcastable 1D arrays.  Returns the per-rectangle fluid fraction.
    """
    cx0, cy0 = float(center[0]), float(center[1])
    radius = float(radius)
    if not radius > 0.0:
        raise InvalidArgumentError("radius must be positive")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    w = np.broadcast_to(np.asarray(w, dtype=float), x0.shape).copy()
    h = np.broadcast_to(np.asarray(h, dtype=float), x0.shape).copy()
    n = x0.shape[0]
    area0 = w * h
    # leaf size at which the tangent-plane error stays within the budget;
    # the per-leaf bound w^3/(8R) summed over ~perimeter/w leaves gives
    # total <= perim * w^2 / (8R) which must be below tol * cell area
    w_stop = np.sqrt(8.0 * radius * tol * area0 / (2.0 * (w + h)))
    acc = np.zeros(n)
    ids = np.arange(n)
    sx, sy, sw, sh, sid = x0, y0, w.copy(), h.copy(), ids
    for depth in range(max_depth + 1):
        if sx.size == 0:
            break
        ccx = sx + 0.5 * sw
        ccy = sy + 0.5 * sh
        gx = ccx - cx0
        gy = ccy - cy0
        dmin = np.hypot(np.maximum(np.abs(gx) - 0.5 * sw, 0.0),
                        np.maximum(np.abs(gy) - 0.5 * sh, 0.0))
        dmax = np.hypot(np.abs(gx) + 0.5 * sw, np.abs(gy) + 0.5 * sh)
        full = dmax <= radius
        empty = dmin >= radius
        mixed = ~(full | empty)
        if np.any(full):
            np.add.at(acc, sid[full], sw[full] * sh[full])
        if not np.any(mixed):
            break
        sx, sy, sw, sh, sid = sx[mixed], sy[mixed], sw[mixed], sh[mixed], sid[mixed]
        gx, gy = gx[mixed], gy[mixed]
        dmin, dmax = dmin[mixed], dmax[mixed]
        leaf = (np.maximum(sw, sh) <= w_stop[sid]) | (depth == max_depth)
        if np.any(leaf):
            lgx, lgy = gx[leaf], gy[leaf]
            r = np.hypot(lgx, lgy)
            safe = r > 1e-12 * np.maximum(sw[leaf], sh[leaf])
            frac = np.empty(r.shape)
            rs = np.where(safe, r, 1.0)
            n1 = lgx / rs
            n2 = lgy / rs
            frac_t = rect_halfplane_fraction(n1, n2, r - radius, 0.5 * sw[leaf], 0.5 * sh[leaf])
            # disk center inside the leaf: fall back to an interval estimate
            span = np.maximum(dmax[leaf] - dmin[leaf], 1e-300)
            frac_f = np.clip((radius - dmin[leaf]) / span, 0.0, 1.0)
            frac = np.where(safe, frac_t, frac_f)
            np.add.at(acc, sid[leaf], frac * sw[leaf] * sh[leaf])
        split = ~leaf
        if not np.any(split):
            break
        sx, sy, sw, sh, sid = sx[split], sy[split], sw[split], sh[split], sid[split]
        hw = 0.5 * sw
        hh = 0.5 * sh
        sx = np.concatenate([sx, sx + hw, sx, sx + hw])
        sy = np.concatenate([sy, sy, sy + hh, sy + hh])
        sw = np.concatenate([hw, hw, hw, hw])
        sh = np.concatenate([hh, hh, hh, hh])
        sid = np.concatenate([sid, sid, sid, sid])
    return acc / area0


def circle_cell_fraction(center, radius: float, cell: Rect, tol: float = 1e-12,
                         max_depth: int = 20) -> float:
    """Fraction of ``cell`` covered by the disk of given center and radius."""
    if not radius > 0.0:
        raise InvalidArgumentError("radius must be positive")
    frac = disk_rect_fractions(center, radius, [cell.xmin], [cell.ymin],
                               [cell.width], [cell.height], tol=tol, max_depth=max_depth)
    return float(min(max(frac[0], 0.0), 1.0))
