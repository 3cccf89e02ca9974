"""Sweep engine and KPI statistics: pools, PDFs, outage, minimum panel sizes.

Realizations are independent work items. The engine may fan them out over
worker processes, but samples are merged strictly by realization_id and every
per-realization value is computed by the same pure function regardless of the
schedule, so output artifacts are bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import scattering
from .catalog import ScenarioRealization, UseCase, realization_axes
from .geometry import cos_sin_deg, element_positions, is_illuminated, place_nodes
from .link import SnrSample, from_db, noise_power, snr, to_db
from .scattering import CONTINUOUS, RisPanel, quantization_residual

# Square sizes bracketing the element counts where outage typically saturates.
DEFAULT_SIZE_LADDER: tuple[tuple[int, int], ...] = tuple(
    (n, n) for n in (5, 10, 15, 20, 25, 30, 40, 50, 60, 80, 100)
)
DEFAULT_THRESHOLDS_DB: tuple[float, ...] = (5.0, 10.0, 20.0, 30.0)
DEFAULT_EPSILON = 0.05

_UE_CHUNK = 128  # UE-side combos per worker task; fixed so tasks never depend on worker count


class EngineError(RuntimeError):
    """Sweep evaluation failed; the message names the offending realization."""


class Criterion(str, Enum):
    MEAN_SNR = "mean_snr"
    OUTAGE = "outage"


@dataclass(frozen=True)
class KpiPool:
    """All received-power/SNR samples for one (use case, panel size) pair."""

    usecase_id: int
    n_v: int
    n_h: int
    realization_ids: np.ndarray
    mu_w: np.ndarray
    gamma_lin: np.ndarray

    def __post_init__(self):
        ids = np.asarray(self.realization_ids, dtype=np.int64)
        mu = np.asarray(self.mu_w, dtype=float)
        gamma = np.asarray(self.gamma_lin, dtype=float)
        if not (ids.shape == mu.shape == gamma.shape) or ids.ndim != 1 or ids.size == 0:
            raise ValueError("pool arrays must be equal-length 1-D and non-empty")
        if np.any(np.diff(ids) <= 0):
            raise ValueError("samples must be sorted by strictly increasing realization_id")
        if np.any(mu < 0) or np.any(~np.isfinite(mu)):
            raise ValueError("mu_w must be finite and >= 0")
        object.__setattr__(self, "realization_ids", ids)
        object.__setattr__(self, "mu_w", mu)
        object.__setattr__(self, "gamma_lin", gamma)

    @property
    def n_samples(self) -> int:
        return int(self.realization_ids.size)

    @property
    def n_elements(self) -> int:
        return self.n_v * self.n_h

    @property
    def shadow_fraction(self) -> float:
        return float(np.mean(self.mu_w == 0.0))

    def gamma_db(self) -> np.ndarray:
        return _db_array(self.gamma_lin)

    def mu_dbm(self) -> np.ndarray:
        return _db_array(self.mu_w) + 30.0


@dataclass(frozen=True)
class Histogram:
    """Density-normalized histogram with shadowed samples as a point mass."""

    edges: np.ndarray
    counts: np.ndarray
    density: bool
    shadow_mass: float
    n_samples: int

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        counts = np.asarray(self.counts, dtype=np.int64)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be strictly ascending with >= 2 entries")
        if counts.shape != (edges.size - 1,):
            raise ValueError("counts must have one entry per bin")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "counts", counts)
        if self.density and counts.sum() > 0:
            integral = float(np.sum(self.densities() * np.diff(edges)))
            if abs(integral - 1.0) > 1e-9:
                raise ValueError(f"density must integrate to 1, got {integral!r}")

    def densities(self) -> np.ndarray:
        total = self.counts.sum()
        if total == 0:
            return np.zeros(self.counts.size)
        return self.counts / (total * np.diff(self.edges))


@dataclass(frozen=True)
class SizingResult:
    """Smallest ladder entry meeting each SNR threshold (None = not achievable)."""

    usecase_id: int
    thresholds_db: tuple[float, ...]
    min_size_per_threshold: tuple[Optional[tuple[int, int]], ...]
    criterion: Criterion
    epsilon: float


def _db_array(values: np.ndarray) -> np.ndarray:
    out = np.full(values.shape, -np.inf)
    pos = values > 0
    out[pos] = 10.0 * np.log10(values[pos])
    return out


def evaluate_realization(
    realization: ScenarioRealization, panel: RisPanel, e_b: float = 1.0
) -> SnrSample:
    """Single-scenario pipeline: place nodes, retarget and quantize phases,
    sum the panel response, convert to SNR. Shadowed scenes give mu = 0."""
    layout = place_nodes(realization.geometry)
    radio = realization.radio
    if is_illuminated(layout.bs, layout.ris_center, layout.ris_normal) and is_illuminated(
        layout.ue, layout.ris_center, layout.ris_normal
    ):
        grid = element_positions(panel, layout)
        plan = scattering.continuous_phase_plan(grid, layout, radio.f_c)
        plan = scattering.quantize_phases(plan, panel.k_phi)
        mu = scattering.received_power_grid(grid, layout, radio, plan)
    else:
        mu = 0.0
    return snr(mu, e_b, noise_power(realization.noise))


def _grid_offsets(n_v: int, n_h: int, d_v: float, d_h: float) -> tuple[np.ndarray, np.ndarray]:
    """Flat in-plane offsets (y, z) of all element centers, k-major then l."""
    row = (np.arange(n_v) - (n_v - 1) / 2.0) * d_v
    col = (np.arange(n_h) - (n_h - 1) / 2.0) * d_h
    z, y = np.meshgrid(row, col, indexing="ij")
    return y.ravel(), z.ravel()


def _sweep_task(args: tuple) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate one (h_ris index, UE-combo slice) block of a sweep.

    Pure function of its arguments; scheduling it on any process yields the
    same floats. BS-side per-element factors are deduplicated across the
    block, UE-side factors across the bs axis.
    """
    (axes, radio_t, panel_t, ib, j_start, j_end) = args
    h_bs_set, h_ris_set, h_ue_set, d_bs_set, d_ue_set, bearings = axes
    f_c, p_t, g_t, g_r, ple_t, ple_r, q = radio_t
    n_v, n_h, d_v, d_h, delta_v, delta_h, k_phi = panel_t

    lam = scattering.SPEED_OF_LIGHT / f_c
    const = p_t * g_t * g_r * lam * lam * delta_v * delta_h / (64.0 * math.pi**3)
    y_off, z_off = _grid_offsets(n_v, n_h, d_v, d_h)
    h_ris = h_ris_set[ib]
    e_z = h_ris + z_off

    a, b, c, d, f, g = (len(s) for s in axes)
    s_due = g
    s_dbs = f * g
    s_hue = d * f * g
    s_hris = c * d * f * g
    s_hbs = b * c * d * f * g

    # BS-side factors for every (h_bs, d_bs_ris) pair; bearings never move the
    # BS off the boresight azimuth in catalog sweeps.
    nb = a * d
    bs_dist = np.empty((nb, y_off.size))
    bs_amp = np.empty((nb, y_off.size))
    bs_id_part = np.empty(nb, dtype=np.int64)
    row = 0
    for ia, h_bs in enumerate(h_bs_set):
        for idx_d, d_bs in enumerate(d_bs_set):
            dx = d_bs
            dy = -y_off
            dz = h_bs - e_z
            dist = np.sqrt(dx * dx + dy * dy + dz * dz)
            cos_t = dx / dist
            bs_dist[row] = dist
            bs_amp[row] = np.power(cos_t, q / 2.0) / np.power(dist, ple_t / 2.0)
            bs_id_part[row] = ia * s_hbs + ib * s_hris + idx_d * s_dbs
            row += 1

    ids_out = np.empty((j_end - j_start) * nb, dtype=np.int64)
    mu_out = np.empty((j_end - j_start) * nb)
    pos = 0
    for j in range(j_start, j_end):
        ic = j // (f * g)
        if_ = (j // g) % f
        ig = j % g
        h_ue = h_ue_set[ic]
        d_ue = d_ue_set[if_]
        cos_b, sin_b = cos_sin_deg(bearings[ig])
        ux = d_ue * cos_b
        uy = d_ue * sin_b
        dy = uy - y_off
        dz = h_ue - e_z
        dist_r = np.sqrt(ux * ux + dy * dy + dz * dz)
        cos_r = ux / dist_r
        ue_amp = np.power(cos_r, q / 2.0) / np.power(dist_r, ple_r / 2.0)

        w = bs_amp * ue_amp[None, :]
        if k_phi is CONTINUOUS:
            s = np.sum(w, axis=1)
            mu = const * s * s
        else:
            delta = quantization_residual(bs_dist + dist_r[None, :], f_c, k_phi)
            re = np.sum(w * np.cos(delta), axis=1)
            im = np.sum(w * np.sin(delta), axis=1)
            mu = const * (re * re + im * im)

        ids_out[pos : pos + nb] = bs_id_part + (ic * s_hue + if_ * s_due + ig)
        mu_out[pos : pos + nb] = mu
        pos += nb
    return ids_out, mu_out


def _build_tasks(axes, radio_t, panel_t) -> list[tuple]:
    _, h_ris_set, h_ue_set, _, d_ue_set, bearings = axes
    n_ue_combos = len(h_ue_set) * len(d_ue_set) * len(bearings)
    tasks = []
    for ib in range(len(h_ris_set)):
        for start in range(0, n_ue_combos, _UE_CHUNK):
            end = min(start + _UE_CHUNK, n_ue_combos)
            tasks.append((axes, radio_t, panel_t, ib, start, end))
    return tasks


def run_sweep(
    uc: UseCase,
    sizes: Sequence[tuple[int, int]] = DEFAULT_SIZE_LADDER,
    *,
    bearings_deg: Optional[Sequence[float]] = None,
    k_phi: Optional[int] = 2,
    e_b: float = 1.0,
    workers: int = 1,
    cell_fill: float = scattering.DEFAULT_CELL_FILL,
) -> list[KpiPool]:
    """Evaluate every realization of `uc` for each panel size.

    Phases are retargeted at each realization's UE and quantized to `k_phi`
    states. Returns one sample pool per size, samples ordered by
    realization_id.
    """
    if len(sizes) == 0:
        raise ValueError("sizes must be non-empty")
    for n_v, n_h in sizes:
        if n_v < 1 or n_h < 1:
            raise ValueError(f"panel sizes must be >= 1x1, got {n_v}x{n_h}")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    axes = realization_axes(uc, bearings_deg)
    radio = uc.radio_params()
    radio_t = (
        radio.f_c,
        radio.p_t,
        radio.g_t,
        radio.g_r,
        radio.ple_t,
        radio.ple_r,
        radio.q_pattern,
    )
    n_real = 1
    for axis in axes:
        n_real *= len(axis)
    n_o = noise_power(uc.noise_params())

    pools = []
    for n_v, n_h in sizes:
        panel = RisPanel.half_wave(n_v, n_h, uc.f_c_hz, k_phi=k_phi, cell_fill=cell_fill)
        panel_t = (
            panel.n_v,
            panel.n_h,
            panel.d_v,
            panel.d_h,
            panel.delta_v,
            panel.delta_h,
            panel.k_phi,
        )
        tasks = _build_tasks(axes, radio_t, panel_t)
        mu = np.full(n_real, -1.0)
        if workers == 1 or len(tasks) == 1:
            results = map(_sweep_task, tasks)
        else:
            executor = ProcessPoolExecutor(max_workers=workers)
            try:
                results = list(executor.map(_sweep_task, tasks))
            finally:
                executor.shutdown()
        for ids, values in results:
            mu[ids] = values
        bad = np.flatnonzero(~np.isfinite(mu) | (mu < 0))
        if bad.size:
            raise EngineError(
                f"sweep of usecase {uc.id} size {n_v}x{n_h} failed at "
                f"realization_id {int(bad[0])}"
            )
        pools.append(
            KpiPool(
                usecase_id=uc.id,
                n_v=n_v,
                n_h=n_h,
                realization_ids=np.arange(n_real, dtype=np.int64),
                mu_w=mu,
                gamma_lin=mu * (e_b / n_o),
            )
        )
    return pools


def estimate_pdf(samples, bins=None) -> Histogram:
    """Density histogram of dB-domain samples; -inf entries (shadowed scenes)
    are excluded from the bins and reported as a separate point mass.

    `bins` may be None (Freedman-Diaconis width), an int count, or explicit
    ascending edges covering the finite sample range.
    """
    s = np.asarray(samples, dtype=float)
    if s.size == 0:
        raise ValueError("need at least one sample")
    if np.any(np.isnan(s)) or np.any(s == np.inf):
        raise ValueError("samples must be finite or the -inf shadow sentinel")
    shadow = s == -np.inf
    finite = s[~shadow]
    if finite.size == 0:
        raise ValueError("all samples are shadowed; nothing to bin")
    lo, hi = float(np.min(finite)), float(np.max(finite))

    if bins is None:
        if hi == lo:
            edges = np.array([lo - 0.5, lo + 0.5])
        else:
            q75, q25 = np.percentile(finite, [75.0, 25.0])
            width = 2.0 * (q75 - q25) * finite.size ** (-1.0 / 3.0)
            n_bins = int(math.ceil((hi - lo) / width)) if width > 0 else 1
            edges = np.linspace(lo, hi, max(n_bins, 1) + 1)
    elif isinstance(bins, (int, np.integer)):
        if bins < 1:
            raise ValueError("bin count must be >= 1")
        if hi == lo:
            edges = np.array([lo - 0.5, lo + 0.5])
        else:
            edges = np.linspace(lo, hi, int(bins) + 1)
    else:
        edges = np.asarray(bins, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("explicit edges must be strictly ascending")
        if edges[0] > lo or edges[-1] < hi:
            raise ValueError("explicit edges must cover the finite sample range")

    counts, _ = np.histogram(finite, edges)
    return Histogram(
        edges=edges,
        counts=counts,
        density=True,
        shadow_mass=float(np.mean(shadow)),
        n_samples=int(s.size),
    )


def mean_power_db(pool: KpiPool, db_domain: bool = False) -> float:
    """Mean received power in dBW; linear-domain averaging by default, with
    shadowed samples entering as exact zeros."""
    if db_domain:
        return float(np.mean(pool.mu_dbm())) - 30.0
    return to_db(float(np.mean(pool.mu_w)))


def mean_snr_db(pool: KpiPool, db_domain: bool = False) -> float:
    if db_domain:
        return float(np.mean(pool.gamma_db()))
    return to_db(float(np.mean(pool.gamma_lin)))


def outage_probability(pool: KpiPool, gamma_th_db: float) -> float:
    """Fraction of samples strictly below the threshold; shadow counts as outage."""
    return float(np.mean(pool.gamma_lin < from_db(gamma_th_db)))


def min_ris_size(
    pools: Sequence[KpiPool],
    thresholds_db: Sequence[float] = DEFAULT_THRESHOLDS_DB,
    criterion: Criterion = Criterion.MEAN_SNR,
    epsilon: float = DEFAULT_EPSILON,
) -> SizingResult:
    """Smallest panel in the ladder meeting each threshold.

    MEAN_SNR: mean SNR >= threshold. OUTAGE: outage probability at the
    threshold <= epsilon. Pools must form a ladder of strictly increasing
    element counts for one use case.
    """
    if len(pools) == 0:
        raise ValueError("pool ladder must be non-empty")
    counts = [p.n_elements for p in pools]
    if any(b <= a for a, b in zip(counts, counts[1:])):
        raise ValueError("pool ladder must be sorted by strictly increasing element count")
    if len({p.usecase_id for p in pools}) != 1:
        raise ValueError("all pools must belong to the same use case")
    criterion = Criterion(criterion)
    if criterion is Criterion.OUTAGE and not (0.0 <= epsilon <= 1.0):
        raise ValueError("epsilon must lie in [0, 1]")

    result: list[Optional[tuple[int, int]]] = []
    if criterion is Criterion.MEAN_SNR:
        stats = [mean_snr_db(p) for p in pools]
        for th in thresholds_db:
            result.append(
                next(((p.n_v, p.n_h) for p, s in zip(pools, stats) if s >= th), None)
            )
    else:
        for th in thresholds_db:
            result.append(
                next(
                    (
                        (p.n_v, p.n_h)
                        for p in pools
                        if outage_probability(p, th) <= epsilon
                    ),
                    None,
                )
            )
    return SizingResult(
        usecase_id=pools[0].usecase_id,
        thresholds_db=tuple(float(t) for t in thresholds_db),
        min_size_per_threshold=tuple(result),
        criterion=criterion,
        epsilon=epsilon,
    )
