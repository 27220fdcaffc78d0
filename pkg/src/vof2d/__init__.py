"""2D geometrical Volume-of-Fluid advection with boundary-aware PLIC
reconstruction and contact-line verification."""

from .config import CaseConfig
from .geometry import (ConvexPolygon, HalfPlane, Rect, area_fraction_halfplane,
                       circle_cell_fraction, clip_polygon_halfplane, position_plic)
from .grid import (FaceVelocityField, Grid, ScalarField, apply_ghost_bc, build_grid,
                   init_volume_fractions, sample_face_velocities)
from .reconstruction import (PlicElement, PlicField, boundary_elvira_normal,
                             boundary_youngs_normal, elvira_normal, reconstruct,
                             youngs_normal)
from .velocity import VelocityField, linear_field, time_linear_field, vortex_field

__version__ = "0.1.0"

__all__ = [
    "CaseConfig",
    "ConvexPolygon",
    "FaceVelocityField",
    "Grid",
    "HalfPlane",
    "PlicElement",
    "PlicField",
    "Rect",
    "ScalarField",
    "VelocityField",
    "apply_ghost_bc",
    "area_fraction_halfplane",
    "boundary_elvira_normal",
    "boundary_youngs_normal",
    "build_grid",
    "circle_cell_fraction",
    "clip_polygon_halfplane",
    "elvira_normal",
    "init_volume_fractions",
    "linear_field",
    "position_plic",
    "reconstruct",
    "sample_face_velocities",
    "time_linear_field",
    "vortex_field",
    "youngs_normal",
]
