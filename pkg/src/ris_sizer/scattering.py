"""Per-element bistatic scattering of a reconfigurable panel.

Each unit cell (k, l) contributes a field amplitude

    rho_kl = sqrt(p_t * g_t * g_r * lambda^2 * dh * dv
                  * cos^q(theta_t) * cos^q(theta_r) / (64 * pi^3))
             / (d_t^(ple_t/2) * d_r^(ple_r/2))

with distances normalized by a 1 m reference so exponents other than 2 stay
dimensionally consistent, a total phase

    psi_kl = (2*pi/lambda) * (d_t + d_r) - phi_kl,

and an integer sample delay n_kl = round((d_t + d_r) * BW / c). In narrowband
operation the delays collapse and the received power is the coherent sum
|sum_kl rho_kl exp(-j psi_kl)|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .geometry import ElementGrid, GeometryError, NodeLayout, Vec3, is_illuminated

# Sentinel for an unquantized (ideal) phase configuration.
CONTINUOUS: Optional[int] = None

TWO_PI = 2.0 * math.pi

# Unit cells span this fraction of the lattice pitch by default (cell edge
# 3*lambda/7 at half-wavelength spacing).
DEFAULT_CELL_FILL = 6.0 / 7.0


class ShadowedNodeError(GeometryError):
    """A required endpoint sits behind the panel plane."""


@dataclass(frozen=True)
class RisPanel:
    """Physical panel description: lattice counts, cell sizes, phase states."""

    n_h: int
    n_v: int
    delta_h: float  # unit-cell height, m
    delta_v: float  # unit-cell width, m
    d_h: float      # column pitch, m
    d_v: float      # row pitch, m
    k_phi: Optional[int] = 2  # phase-state count; CONTINUOUS (None) = ideal

    def __post_init__(self):
        if self.n_h < 1 or self.n_v < 1:
            raise ValueError("element counts must be >= 1")
        if not (0 < self.delta_h <= self.d_h) or not (0 < self.delta_v <= self.d_v):
            raise ValueError("unit cells must fit inside the lattice pitch")
        if self.k_phi is not CONTINUOUS and self.k_phi < 1:
            raise ValueError("k_phi must be >= 1 or CONTINUOUS")

    @property
    def n_elements(self) -> int:
        return self.n_h * self.n_v

    @property
    def cell_area(self) -> float:
        return self.delta_h * self.delta_v

    @staticmethod
    def half_wave(
        n_v: int,
        n_h: int,
        f_c: float,
        k_phi: Optional[int] = 2,
        cell_fill: float = DEFAULT_CELL_FILL,
    ) -> "RisPanel":
        """Half-wavelength lattice at carrier f_c with cells filling the pitch
        by `cell_fill` on each axis."""
        lam = SPEED_OF_LIGHT / f_c
        pitch = lam / 2.0
        return RisPanel(
            n_h=n_h,
            n_v=n_v,
            delta_h=cell_fill * pitch,
            delta_v=cell_fill * pitch,
            d_h=pitch,
            d_v=pitch,
            k_phi=k_phi,
        )


@dataclass(frozen=True)
class RadioParams:
    """Link-level radio parameters shared by all elements of a scene."""

    f_c: float        # carrier, Hz
    p_t: float        # transmit power, W
    g_t: float = 10.0 ** (10.0 / 10.0)  # BS antenna gain, linear
    g_r: float = 1.0                    # UE antenna gain, linear
    ple_t: float = 2.0
    ple_r: float = 2.0
    q_pattern: float = 2.0

    def __post_init__(self):
        if not (self.f_c > 0):
            raise ValueError(f"f_c must be > 0 Hz, got {self.f_c!r}")
        if not (self.p_t > 0):
            raise ValueError(f"p_t must be > 0 W, got {self.p_t!r}")
        if not (self.g_t > 0 and self.g_r > 0):
            raise ValueError("antenna gains must be > 0 (linear)")
        for name in ("ple_t", "ple_r"):
            v = getattr(self, name)
            if not (1.0 <= v <= 4.0):
                raise ValueError(f"{name} must lie in [1, 4], got {v!r}")
        if self.q_pattern < 0:
            raise ValueError("q_pattern must be >= 0")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.f_c


@dataclass(frozen=True)
class PhasePlan:
    """Per-element reflection phases in [0, 2*pi); k_phi records the state
    count the entries are drawn from (CONTINUOUS if unquantized)."""

    phi: np.ndarray  # (n_v, n_h)
    k_phi: Optional[int] = CONTINUOUS

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim != 2:
            raise ValueError("phi must be a (n_v, n_h) matrix")
        if np.any(~np.isfinite(phi)) or np.any(phi < 0) or np.any(phi >= TWO_PI):
            raise ValueError("phases must be finite and lie in [0, 2*pi)")
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class ElementResponse:
    """One unit cell's contribution: amplitude, total phase, sample delay."""

    rho: float
    psi: float
    n_delay: int

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be >= 0")
        if self.n_delay < 0:
            raise ValueError("n_delay must be >= 0")


@dataclass(frozen=True)
class NarrowbandReport:
    """Path-length spread across the panel vs. the symbol length c/BW."""

    max_path_spread: float
    spread_fraction: float


def _leg_arrays(grid: ElementGrid, node: Vec3) -> tuple[np.ndarray, np.ndarray]:
    """Per-element distance and cos(angle off normal) toward a node.

    cos values can be <= 0 for nodes on/behind the panel plane; callers apply
    the shadow rule.
    """
    diff = node.as_array()[None, None, :] - grid.centers
    d = np.sqrt(np.sum(diff * diff, axis=2))
    if np.any(d == 0.0):
        raise GeometryError("node coincides with an element center")
    cos = (diff @ grid.normal.as_array()) / d
    return d, cos


def _pattern(cos_theta: np.ndarray, q: float) -> np.ndarray:
    """Element power pattern F(theta) = cos^q(theta), zero behind the panel."""
    return np.where(cos_theta > 0.0, np.power(np.maximum(cos_theta, 0.0), q), 0.0)


def amplitude_grid(grid: ElementGrid, layout: NodeLayout, radio: RadioParams) -> np.ndarray:
    """All rho_kl at once; identically zero if either endpoint is shadowed."""
    if not (
        is_illuminated(layout.bs, layout.ris_center, layout.ris_normal)
        and is_illuminated(layout.ue, layout.ris_center, layout.ris_normal)
    ):
        return np.zeros((grid.n_v, grid.n_h))
    d_t, cos_t = _leg_arrays(grid, layout.bs)
    d_r, cos_r = _leg_arrays(grid, layout.ue)
    lam = radio.wavelength
    const = (
        radio.p_t * radio.g_t * radio.g_r * lam * lam * grid.cell_area
        / (64.0 * math.pi**3)
    )
    f_prod = _pattern(cos_t, radio.q_pattern) * _pattern(cos_r, radio.q_pattern)
    return np.sqrt(const * f_prod) / (
        np.power(d_t, radio.ple_t / 2.0) * np.power(d_r, radio.ple_r / 2.0)
    )


def path_sum_grid(grid: ElementGrid, layout: NodeLayout) -> np.ndarray:
    """d_t,kl + d_r,kl for every element."""
    d_t, _ = _leg_arrays(grid, layout.bs)
    d_r, _ = _leg_arrays(grid, layout.ue)
    return d_t + d_r


def continuous_phase_plan(grid: ElementGrid, layout: NodeLayout, f_c: float) -> PhasePlan:
    """Phases that make every element's total phase a multiple of 2*pi, i.e.
    fully coherent at the UE: phi_kl = mod((2*pi/lambda)(d_t + d_r), 2*pi)."""
    for name, node in (("BS", layout.bs), ("UE", layout.ue)):
        if not is_illuminated(node, layout.ris_center, layout.ris_normal):
            raise ShadowedNodeError(f"{name} is shadowed; no phase plan exists")
    lam = SPEED_OF_LIGHT / f_c
    phi = np.mod((TWO_PI / lam) * path_sum_grid(grid, layout), TWO_PI)
    return PhasePlan(phi=phi, k_phi=CONTINUOUS)


def quantize_phases(plan: PhasePlan, k_phi: Optional[int]) -> PhasePlan:
    """Snap each phase to the nearest of {2*pi*i/k_phi} under circular
    distance; exact midpoints go to the lower state index."""
    if k_phi is CONTINUOUS:
        return plan
    if k_phi < 1:
        raise ValueError("k_phi must be >= 1 or CONTINUOUS")
    spacing = TWO_PI / k_phi
    x = plan.phi / spacing  # in [0, k_phi)
    lower = np.floor(x)
    frac = x - lower
    nearest = np.where(frac < 0.5, lower, lower + 1.0)
    low_idx = lower.astype(np.int64) % k_phi
    up_idx = (lower.astype(np.int64) + 1) % k_phi
    tie = np.minimum(low_idx, up_idx)
    idx = np.where(frac == 0.5, tie, nearest.astype(np.int64) % k_phi)
    return PhasePlan(phi=idx * spacing, k_phi=k_phi)


def quantization_residual(path_sum: np.ndarray, f_c: float, k_phi: Optional[int]) -> np.ndarray:
    """Total-phase residual delta_kl = psi_kl mod 2*pi in (-pi, pi] for a plan
    retargeted at the UE and then quantized to k_phi states.

    Used by the sweep fast path; equals phi_continuous - phi_quantized.
    """
    if k_phi is CONTINUOUS:
        return np.zeros_like(path_sum)
    lam = SPEED_OF_LIGHT / f_c
    spacing = TWO_PI / k_phi
    x = np.mod((TWO_PI / lam) * path_sum, TWO_PI) / spacing
    lower = np.floor(x)
    frac = x - lower
    nearest = np.where(frac < 0.5, lower, lower + 1.0)
    low_idx = lower.astype(np.int64) % k_phi
    up_idx = (lower.astype(np.int64) + 1) % k_phi
    tie = np.minimum(low_idx, up_idx)
    idx = np.where(frac == 0.5, tie, nearest.astype(np.int64) % k_phi)
    delta = (x - idx) * spacing
    return np.mod(delta + math.pi, TWO_PI) - math.pi


def total_phase_grid(grid: ElementGrid, layout: NodeLayout, f_c: float, plan: PhasePlan) -> np.ndarray:
    """psi_kl = (2*pi/lambda)(d_t + d_r) - phi_kl for every element."""
    lam = SPEED_OF_LIGHT / f_c
    return (TWO_PI / lam) * path_sum_grid(grid, layout) - plan.phi


def element_response(
    k: int,
    l: int,
    grid: ElementGrid,
    layout: NodeLayout,
    radio: RadioParams,
    plan: PhasePlan,
    bw: float,
) -> ElementResponse:
    """Scalar, element-by-element evaluation of one unit cell.

    Behind-panel geometry yields a zero-amplitude response rather than an
    exception, so shadowed scenes fold naturally into power sums.
    """
    center = grid.center_at(k, l)
    d_t = (layout.bs - center).norm()
    d_r = (layout.ue - center).norm()
    if d_t == 0.0 or d_r == 0.0:
        raise GeometryError("node coincides with an element center")
    n = layout.ris_normal
    cos_t = (layout.bs - center).dot(n) / d_t
    cos_r = (layout.ue - center).dot(n) / d_r
    phi = float(plan.phi[k, l])
    psi = (TWO_PI / radio.wavelength) * (d_t + d_r) - phi
    n_delay = int(round((d_t + d_r) * bw / SPEED_OF_LIGHT))
    if cos_t <= 0.0 or cos_r <= 0.0:
        return ElementResponse(rho=0.0, psi=psi, n_delay=n_delay)
    const = (
        radio.p_t
        * radio.g_t
        * radio.g_r
        * radio.wavelength**2
        * grid.cell_area
        / (64.0 * math.pi**3)
    )
    rho = math.sqrt(const * cos_t**radio.q_pattern * cos_r**radio.q_pattern) / (
        d_t ** (radio.ple_t / 2.0) * d_r ** (radio.ple_r / 2.0)
    )
    return ElementResponse(rho=rho, psi=psi, n_delay=n_delay)


def received_power(responses: Iterable[ElementResponse]) -> float:
    """Narrowband coherent power |sum rho * exp(-j psi)|^2; empty -> 0."""
    acc = complex(0.0, 0.0)
    empty = True
    for r in responses:
        acc += r.rho * complex(math.cos(r.psi), -math.sin(r.psi))
        empty = False
    if empty:
        return 0.0
    return abs(acc) ** 2


def received_power_grid(
    grid: ElementGrid, layout: NodeLayout, radio: RadioParams, plan: PhasePlan
) -> float:
    """Vectorized narrowband coherent power for a whole panel."""
    rho = amplitude_grid(grid, layout, radio)
    if not np.any(rho > 0.0):
        return 0.0
    psi = total_phase_grid(grid, layout, radio.f_c, plan)
    field = np.sum(rho.ravel() * np.exp(-1j * psi.ravel()))
    return float(np.abs(field) ** 2)


def narrowband_validity(grid: ElementGrid, layout: NodeLayout, bw: float) -> NarrowbandReport:
    """Check that the panel's path-length spread is small vs. c/BW."""
    sums = path_sum_grid(grid, layout)
    spread = float(np.max(sums) - np.min(sums))
    return NarrowbandReport(
        max_path_spread=spread, spread_fraction=spread / (SPEED_OF_LIGHT / bw)
    )
