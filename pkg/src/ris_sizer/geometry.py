"""3D node placement and per-element geometry for panel scattering scenes.

Convention: the panel center sits on the z-axis at its mounting height, the
panel surface normal points along +x, and bearings are azimuth angles (deg)
measured from the normal at the panel center. Tabled BS/UE distances are
horizontal ground distances; heights are absolute z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNIT_NORM_TOL = 1e-12
PLANE_TOL = 1e-9


class GeometryError(ValueError):
    """Invalid scene geometry (bad distances, degenerate nodes, ...)."""


@dataclass(frozen=True)
class Vec3:
    """Cartesian point/vector in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise GeometryError(f"Vec3.{name} must be finite, got {v!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def norm(self) -> float:
        return math.sqrt(self.dot(self))


X_AXIS = Vec3(1.0, 0.0, 0.0)


@dataclass(frozen=True)
class ScenarioGeometryInput:
    """Scalar scene parameters: heights, horizontal distances, bearings."""

    h_bs: float
    h_ris: float
    h_ue: float
    d_bs_ris: float
    d_ris_ue: float
    bearing_bs_deg: float = 0.0
    bearing_ue_deg: float = 0.0

    def __post_init__(self):
        for name in ("h_bs", "h_ris", "h_ue"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise GeometryError(f"{name} must be finite and >= 0, got {v!r}")
        for name in ("d_bs_ris", "d_ris_ue"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise GeometryError(f"{name} must be finite and > 0, got {v!r}")
        for name in ("bearing_bs_deg", "bearing_ue_deg"):
            v = getattr(self, name)
            if not math.isfinite(v) or not (-180.0 < v <= 180.0):
                raise GeometryError(f"{name} must lie in (-180, 180], got {v!r}")


@dataclass(frozen=True)
class NodeLayout:
    """Concrete BS / panel / UE positions plus the panel surface normal."""

    bs: Vec3
    ris_center: Vec3
    ris_normal: Vec3
    ue: Vec3

    def __post_init__(self):
        if abs(self.ris_normal.norm() - 1.0) > UNIT_NORM_TOL:
            raise GeometryError("ris_normal must be a unit vector")
        if (self.bs - self.ris_center).norm() == 0.0:
            raise GeometryError("bs must not coincide with ris_center")
        if (self.ue - self.ris_center).norm() == 0.0:
            raise GeometryError("ue must not coincide with ris_center")


@dataclass(frozen=True)
class ElementGrid:
    """Unit-cell center lattice, row-major (k over rows/vertical, l over columns)."""

    centers: np.ndarray  # shape (n_v, n_h, 3)
    origin: Vec3         # panel center the lattice is built around
    normal: Vec3
    d_v: float
    d_h: float
    delta_v: float       # unit-cell width, m
    delta_h: float       # unit-cell height, m

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=float)
        if c.ndim != 3 or c.shape[2] != 3 or c.shape[0] < 1 or c.shape[1] < 1:
            raise GeometryError("centers must have shape (n_v, n_h, 3)")
        object.__setattr__(self, "centers", c)
        centroid = c.reshape(-1, 3).mean(axis=0)
        if np.max(np.abs(centroid - self.origin.as_array())) > PLANE_TOL:
            raise GeometryError("lattice centroid must coincide with the panel center")
        offsets = c.reshape(-1, 3) - self.origin.as_array()
        if np.max(np.abs(offsets @ self.normal.as_array())) > UNIT_NORM_TOL * max(
            1.0, float(np.max(np.abs(offsets)))
        ):
            raise GeometryError("all element centers must lie in the panel plane")

    @property
    def n_v(self) -> int:
        return self.centers.shape[0]

    @property
    def n_h(self) -> int:
        return self.centers.shape[1]

    @property
    def n_elements(self) -> int:
        return self.n_v * self.n_h

    @property
    def cell_area(self) -> float:
        return self.delta_v * self.delta_h

    def center_at(self, k: int, l: int) -> Vec3:
        x, y, z = self.centers[k, l]
        return Vec3(float(x), float(y), float(z))

    def flat(self) -> np.ndarray:
        """Element centers as (n_v * n_h, 3), k-major then l."""
        return self.centers.reshape(-1, 3)


def cos_sin_deg(deg: float) -> tuple[float, float]:
    """Degree-domain cos/sin, exact at the quadrant bearings so that e.g. a
    90-degree node lands precisely on the panel plane (grazing = shadowed)."""
    quadrant = deg % 360.0
    if quadrant == 0.0:
        return 1.0, 0.0
    if quadrant == 90.0:
        return 0.0, 1.0
    if quadrant == 180.0:
        return -1.0, 0.0
    if quadrant == 270.0:
        return 0.0, -1.0
    rad = math.radians(deg)
    return math.cos(rad), math.sin(rad)


def place_nodes(g: ScenarioGeometryInput) -> NodeLayout:
    """Realize the scene: panel center at (0, 0, h_ris) facing +x, BS/UE on
    circles of the given horizontal radii at their bearings and heights."""
    cos_b, sin_b = cos_sin_deg(g.bearing_bs_deg)
    cos_u, sin_u = cos_sin_deg(g.bearing_ue_deg)
    bs = Vec3(g.d_bs_ris * cos_b, g.d_bs_ris * sin_b, g.h_bs)
    ue = Vec3(g.d_ris_ue * cos_u, g.d_ris_ue * sin_u, g.h_ue)
    return NodeLayout(bs=bs, ris_center=Vec3(0.0, 0.0, g.h_ris), ris_normal=X_AXIS, ue=ue)


def _panel_axes(normal: Vec3) -> tuple[np.ndarray, np.ndarray]:
    """In-plane horizontal/vertical unit axes for a panel with the given normal."""
    n = normal.as_array()
    up = np.array([0.0, 0.0, 1.0])
    h = np.cross(up, n)
    hn = np.linalg.norm(h)
    if hn < 1e-9:
        raise GeometryError("panel normal must not be vertical")
    h = h / hn
    v = np.cross(n, h)
    return h, v / np.linalg.norm(v)


def element_positions(panel, layout: NodeLayout) -> ElementGrid:
    """Center-anchored lattice of unit-cell centers in the panel plane.

    Rows (index k) step by d_v along the in-plane vertical axis, columns
    (index l) by d_h along the in-plane horizontal axis. Even counts get
    half-spacing offsets so the centroid stays on the panel center.
    """
    if panel.n_h < 1 or panel.n_v < 1:
        raise GeometryError("panel must have at least one element per axis")
    h_axis, v_axis = _panel_axes(layout.ris_normal)
    row_off = (np.arange(panel.n_v) - (panel.n_v - 1) / 2.0) * panel.d_v
    col_off = (np.arange(panel.n_h) - (panel.n_h - 1) / 2.0) * panel.d_h
    centers = (
        layout.ris_center.as_array()[None, None, :]
        + row_off[:, None, None] * v_axis[None, None, :]
        + col_off[None, :, None] * h_axis[None, None, :]
    )
    return ElementGrid(
        centers=centers,
        origin=layout.ris_center,
        normal=layout.ris_normal,
        d_v=panel.d_v,
        d_h=panel.d_h,
        delta_v=panel.delta_v,
        delta_h=panel.delta_h,
    )


def path_metrics(p: Vec3, q: Vec3, normal: Vec3) -> tuple[float, float]:
    """Distance |q - p| and the angle of (q - p) off the surface normal at p."""
    d = q - p
    dist = d.norm()
    if dist == 0.0:
        raise GeometryError("path endpoints must not coincide")
    cos_angle = d.dot(normal) / (dist * normal.norm())
    return dist, math.acos(min(1.0, max(-1.0, cos_angle)))


def is_illuminated(node: Vec3, ris_center: Vec3, normal: Vec3) -> bool:
    """True iff the node lies strictly in the panel's front half-space.

    Grazing incidence (node exactly in the panel plane) counts as shadowed:
    the projected aperture vanishes.
    """
    if (node - ris_center).norm() == 0.0:
        raise GeometryError("node must not coincide with ris_center")
    return (node - ris_center).dot(normal) > 0.0
