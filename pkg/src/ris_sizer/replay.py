"""Trajectory replay: fixed BS and panel, per-point retargeted SNR curves.

Reproduces field-test style evaluations: a measured UE track is substituted
point by point into the simulation, one SNR curve per path-loss exponent, and
externally supplied measurements can be compared against any curve.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.stats import spearmanr

from . import scattering
from .artifacts import atomic_write_text, format_float, parse_db
from .geometry import X_AXIS, NodeLayout, Vec3, element_positions, is_illuminated
from .link import NoiseParams, noise_power, snr
from .scattering import RadioParams, RisPanel

TRAJECTORY_COLUMNS = ("x_m", "y_m", "z_m", "label")

# Bundled example scene: mmWave rooftop BS, balcony-mounted panel. Element
# counts and radio levels are declared placeholders; only the trend matters.
BUNDLED_TRAJECTORY = os.path.join(os.path.dirname(__file__), "data", "kartal_trajectory.csv")


class ReplayError(ValueError):
    """Bad trajectory/measurement data."""


@dataclass(frozen=True)
class SceneTemplate:
    """Fixed BS and panel placement shared by every trajectory point."""

    bs: Vec3
    ris_center: Vec3
    ris_normal: Vec3 = X_AXIS


@dataclass(frozen=True)
class Trajectory:
    """Ordered UE test points with unique labels."""

    points: tuple[tuple[Vec3, str], ...]

    def __post_init__(self):
        if len(self.points) < 1:
            raise ReplayError("trajectory must contain at least one point")
        labels = [label for _, label in self.points]
        if len(set(labels)) != len(labels):
            raise ReplayError("trajectory labels must be unique")

    def __len__(self) -> int:
        return len(self.points)

    def distances_from(self, origin: Vec3) -> np.ndarray:
        return np.array([(p - origin).norm() for p, _ in self.points])


@dataclass(frozen=True)
class ReplayCurve:
    """Per-point SNR for one path-loss exponent, aligned with the trajectory."""

    ple: float
    snr_db_per_point: tuple[float, ...]


@dataclass(frozen=True)
class ReplayStats:
    bias: float
    rmse: float
    spearman: float


def replay(
    template: SceneTemplate,
    panel: RisPanel,
    radio: RadioParams,
    noise: NoiseParams,
    trajectory: Trajectory,
    ple_list: Sequence[float],
    e_b: float = 1.0,
) -> list[ReplayCurve]:
    """One SNR curve per path-loss exponent; both legs share the exponent and
    the panel is re-phased toward every point. Shadowed points yield -inf."""
    if len(ple_list) == 0:
        raise ReplayError("ple_list must be non-empty")
    for ple in ple_list:
        if not (1.0 <= ple <= 4.0):
            raise ReplayError(f"ple values must lie in [1, 4], got {ple!r}")
    if not is_illuminated(template.bs, template.ris_center, template.ris_normal):
        raise ReplayError("BS is shadowed in the replay scene")
    n_o = noise_power(noise)
    curves = []
    for ple in ple_list:
        radio_ple = replace(radio, ple_t=float(ple), ple_r=float(ple))
        values = []
        for point, _label in trajectory.points:
            if not is_illuminated(point, template.ris_center, template.ris_normal):
                values.append(float("-inf"))
                continue
            layout = NodeLayout(
                bs=template.bs,
                ris_center=template.ris_center,
                ris_normal=template.ris_normal,
                ue=point,
            )
            grid = element_positions(panel, layout)
            plan = scattering.continuous_phase_plan(grid, layout, radio_ple.f_c)
            plan = scattering.quantize_phases(plan, panel.k_phi)
            mu = scattering.received_power_grid(grid, layout, radio_ple, plan)
            values.append(snr(mu, e_b, n_o).gamma_db)
        curves.append(ReplayCurve(ple=float(ple), snr_db_per_point=tuple(values)))
    return curves


def compare_with_measurements(curve: ReplayCurve, measured: Sequence[float]) -> ReplayStats:
    """Bias (mean measured-minus-simulated), RMSE, and Spearman rank
    correlation; pairs with a -inf entry on either side are skipped."""
    sim = np.asarray(curve.snr_db_per_point, dtype=float)
    meas = np.asarray(measured, dtype=float)
    if sim.shape != meas.shape:
        raise ReplayError(
            f"measurement length {meas.size} does not match curve length {sim.size}"
        )
    finite = np.isfinite(sim) & np.isfinite(meas)
    if not np.any(finite):
        raise ReplayError("no finite point pairs to compare")
    err = meas[finite] - sim[finite]
    rho = spearmanr(sim[finite], meas[finite]).statistic if finite.sum() > 1 else 1.0
    return ReplayStats(
        bias=float(np.mean(err)),
        rmse=float(np.sqrt(np.mean(err * err))),
        spearman=float(rho),
    )


def load_trajectory_csv(path: str) -> tuple[Trajectory, Optional[np.ndarray]]:
    """Read x_m,y_m,z_m,label rows; an optional snr_db column carries measured
    data and is returned alongside the trajectory."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(line for line in handle if not line.startswith("#"))
        try:
            header = next(reader)
        except StopIteration:
            raise ReplayError(f"empty trajectory file: {path}") from None
        has_snr = tuple(header) == TRAJECTORY_COLUMNS + ("snr_db",)
        if not has_snr and tuple(header) != TRAJECTORY_COLUMNS:
            raise ReplayError(
                f"trajectory header must be {','.join(TRAJECTORY_COLUMNS)}[,snr_db]; got {header}"
            )
        points = []
        measured = []
        for row in reader:
            if not row:
                continue
            x, y, z = (float(v) for v in row[:3])
            points.append((Vec3(x, y, z), row[3]))
            if has_snr:
                measured.append(parse_db(row[4]))
    trajectory = Trajectory(points=tuple(points))
    return trajectory, (np.array(measured) if has_snr else None)


def write_replay_csv(
    path: str, template: SceneTemplate, trajectory: Trajectory, curves: Sequence[ReplayCurve]
) -> None:
    """Curves as label,distance_m,snr_db_ple_<value>... rows."""
    distances = trajectory.distances_from(template.ris_center)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["label", "distance_m"] + [f"snr_db_ple_{curve.ple:g}" for curve in curves]
    )
    for i, (_, label) in enumerate(trajectory.points):
        writer.writerow(
            [label, format_float(distances[i])]
            + [format_float(curve.snr_db_per_point[i]) for curve in curves]
        )
    atomic_write_text(path, buf.getvalue())


def bundled_scene() -> tuple[SceneTemplate, RisPanel, RadioParams, NoiseParams]:
    """The example scene shipped with the bundled trajectory (placeholder
    panel and radio levels; geometry: elevated BS, balcony panel)."""
    f_c = 26e9
    template = SceneTemplate(
        bs=Vec3(80.0, 0.0, 88.7), ris_center=Vec3(0.0, 0.0, 64.0)
    )
    panel = RisPanel.half_wave(64, 64, f_c, k_phi=2)
    radio = RadioParams(f_c=f_c, p_t=10.0)
    noise = NoiseParams(bw=8.64e6, f_n=10.0 ** (7.0 / 10.0))
    return template, panel, radio, noise
