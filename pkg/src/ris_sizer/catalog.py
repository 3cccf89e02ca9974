"""Built-in deployment use cases and their exhaustive scenario expansion.

The catalog holds 16 use cases spanning outdoor Umi/Uma/RMa and indoor
office/industrial/home deployments across sub-6 GHz, FR3, and mmWave bands.
Every parameter set is expanded by exhaustive Cartesian product (not random
sampling) so pools are exact and reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .geometry import GeometryError, ScenarioGeometryInput
from .link import NoiseParams, dbm_to_watts, from_db
from .scattering import RadioParams

# Declared defaults for quantities the use-case tables do not pin down.
DEFAULT_G_T_DBI = 10.0
DEFAULT_G_R_DBI = 0.0
DEFAULT_F_N_DB = 7.0
DEFAULT_PLE = 2.0
DEFAULT_Q_PATTERN = 2.0
DEFAULT_T_S_K = 290.0
DEFAULT_BEARINGS_DEG: tuple[float, ...] = tuple(float(b) for b in range(-60, 65, 5))

CUSTOM_ID_FLOOR = 100


class UseCaseError(ValueError):
    """Invalid use-case definition or config document."""


@dataclass(frozen=True)
class UseCase:
    """One cataloged deployment scenario with its parameter value sets."""

    id: int
    name: str
    p_t_dbm: float
    f_c_mhz: float
    b_ue_khz: float
    h_bs_set: tuple[float, ...]
    h_ris_set: tuple[float, ...]
    h_ue_set: tuple[float, ...]
    d_bs_ris_set: tuple[float, ...]
    d_ris_ue_set: tuple[float, ...]
    g_t_dbi: float = DEFAULT_G_T_DBI
    g_r_dbi: float = DEFAULT_G_R_DBI
    f_n_db: float = DEFAULT_F_N_DB
    ple_t: float = DEFAULT_PLE
    ple_r: float = DEFAULT_PLE
    q_pattern: float = DEFAULT_Q_PATTERN
    bearings_deg: Optional[tuple[float, ...]] = None
    t_s_k: float = DEFAULT_T_S_K

    def __post_init__(self):
        if self.id < 1:
            raise UseCaseError(f"id must be >= 1, got {self.id!r}")
        for name in ("p_t_dbm",):
            if not math.isfinite(getattr(self, name)):
                raise UseCaseError(f"{name} must be finite")
        for name in ("f_c_mhz", "b_ue_khz"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise UseCaseError(f"{name} must be > 0, got {v!r}")
        for name in (
            "h_bs_set",
            "h_ris_set",
            "h_ue_set",
            "d_bs_ris_set",
            "d_ris_ue_set",
        ):
            values = getattr(self, name)
            if len(values) == 0:
                raise UseCaseError(f"{name} must be non-empty")
            if any(not (math.isfinite(v) and v > 0) for v in values):
                raise UseCaseError(f"{name} values must all be positive, got {values!r}")

    @property
    def f_c_hz(self) -> float:
        return self.f_c_mhz * 1e6

    @property
    def bw_hz(self) -> float:
        return self.b_ue_khz * 1e3

    def radio_params(self) -> RadioParams:
        return RadioParams(
            f_c=self.f_c_hz,
            p_t=dbm_to_watts(self.p_t_dbm),
            g_t=from_db(self.g_t_dbi),
            g_r=from_db(self.g_r_dbi),
            ple_t=self.ple_t,
            ple_r=self.ple_r,
            q_pattern=self.q_pattern,
        )

    def noise_params(self) -> NoiseParams:
        return NoiseParams(bw=self.bw_hz, t_s=self.t_s_k, f_n=from_db(self.f_n_db))

    def to_config(self) -> dict:
        """Config-document form (the JSON schema for custom use cases)."""
        doc = {
            "name": self.name,
            "p_t_dbm": self.p_t_dbm,
            "f_c_mhz": self.f_c_mhz,
            "b_ue_khz": self.b_ue_khz,
            "h_bs_set": list(self.h_bs_set),
            "h_ris_set": list(self.h_ris_set),
            "h_ue_set": list(self.h_ue_set),
            "d_bs_ris_set": list(self.d_bs_ris_set),
            "d_ris_ue_set": list(self.d_ris_ue_set),
        }
        if self.g_t_dbi != DEFAULT_G_T_DBI:
            doc["g_t_dbi"] = self.g_t_dbi
        if self.g_r_dbi != DEFAULT_G_R_DBI:
            doc["g_r_dbi"] = self.g_r_dbi
        if self.f_n_db != DEFAULT_F_N_DB:
            doc["f_n_db"] = self.f_n_db
        if self.ple_t != DEFAULT_PLE:
            doc["ple_t"] = self.ple_t
        if self.ple_r != DEFAULT_PLE:
            doc["ple_r"] = self.ple_r
        if self.q_pattern != DEFAULT_Q_PATTERN:
            doc["q_pattern"] = self.q_pattern
        if self.bearings_deg is not None:
            doc["bearings_deg"] = list(self.bearings_deg)
        return doc


@dataclass(frozen=True)
class ScenarioRealization:
    """One concrete geometry + radio + noise draw from a use case."""

    geometry: ScenarioGeometryInput
    radio: RadioParams
    noise: NoiseParams
    realization_id: int


def _uc(
    uc_id: int,
    name: str,
    p_t_dbm: float,
    f_c_mhz: float,
    b_ue_khz: float,
    h_bs: Sequence[float],
    h_ris: Sequence[float],
    h_ue: Sequence[float],
    d_bs_ris: Sequence[float],
    d_ris_ue: Sequence[float],
) -> UseCase:
    return UseCase(
        id=uc_id,
        name=name,
        p_t_dbm=p_t_dbm,
        f_c_mhz=f_c_mhz,
        b_ue_khz=b_ue_khz,
        h_bs_set=tuple(float(v) for v in h_bs),
        h_ris_set=tuple(float(v) for v in h_ris),
        h_ue_set=tuple(float(v) for v in h_ue),
        d_bs_ris_set=tuple(float(v) for v in d_bs_ris),
        d_ris_ue_set=tuple(float(v) for v in d_ris_ue),
    )


_BUILTIN: tuple[UseCase, ...] = (
    # Outdoor
    _uc(1, "Sub-6 Umi", 37, 3500, 1440,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30, 50, 100),
        (50, 100, 150, 200), (50, 100, 150, 200)),
    _uc(2, "Sub-6 Uma", 46, 3500, 1440,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30, 50, 100),
        (200, 300, 400, 500), (200, 300, 400, 500)),
    _uc(3, "Sub-6 RMa", 52, 3500, 1440,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30),
        (500, 1000, 1500, 2000), (500, 1000, 1500, 2000)),
    _uc(4, "FR3 Umi", 37, 8000, 2880,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30, 50, 100),
        (50, 75, 125, 150), (50, 75, 125, 150)),
    _uc(5, "FR3 Uma", 46, 8000, 2880,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30, 50, 100),
        (100, 175, 225, 300), (50, 75, 125, 150)),
    _uc(6, "FR3 RMa", 52, 8000, 2880,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30),
        (300, 700, 1100, 1500), (300, 700, 1100, 1500)),
    _uc(7, "mmW Umi", 40, 27000, 8640,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30, 50, 100),
        (20, 50, 70, 100), (20, 50, 70, 100)),
    _uc(8, "mmW Uma", 49, 27000, 8640,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30, 50, 100),
        (50, 100, 150, 200), (50, 100, 150, 200)),
    _uc(9, "mmW RMa", 55, 27000, 17280,
        (10, 15, 20, 30), (10, 25, 40), (1, 2, 5, 15, 30),
        (100, 400, 700, 1000), (100, 400, 700, 1000)),
    # Indoor
    _uc(10, "Home Wifi", 30, 6000, 2160,
        (1, 2, 3), (2, 3), (1, 2), (3, 5, 8), (3, 5, 8)),
    _uc(11, "Sub-6 GHz Small Office", 30, 3500, 1440,
        (2, 3, 4), (2, 3, 4), (1, 2, 3), (3, 10, 15, 20), (3, 10, 15, 20)),
    _uc(12, "Sub-6 GHz Large Industrial", 37, 3500, 2880,
        (4, 6, 8, 10), (4, 6, 8, 10), (1, 2, 4, 6, 8), (20, 40, 60, 80), (20, 40, 60, 80)),
    _uc(13, "FR3 Small Office", 30, 8000, 4320,
        (2, 3, 4), (2, 4, 6), (1, 2), (2, 5, 10, 15), (2, 5, 10, 15)),
    _uc(14, "FR3 Large Industrial", 37, 8000, 8640,
        (4, 6, 8, 10), (4, 6, 8, 10), (1, 2, 4, 6, 8), (10, 30, 50, 80), (10, 30, 50, 80)),
    _uc(15, "mmWave Small Office", 30, 27000, 8640,
        (2, 3, 4), (2, 4, 6), (1, 2), (1, 3, 6.5, 10), (1, 3, 6.5, 10)),
    _uc(16, "mmWave Large Industrial", 37, 27000, 8640,
        (4, 6, 8, 10), (4, 6, 8, 10), (1, 2, 4, 6, 8), (5, 20, 50, 80), (5, 20, 50, 80)),
)


def builtin_usecases() -> list[UseCase]:
    """The 16 cataloged use cases, ids 1..16."""
    return list(_BUILTIN)


def get_usecase(uc_id: int) -> UseCase:
    for uc in _BUILTIN:
        if uc.id == uc_id:
            return uc
    raise UseCaseError(f"usecase id must be one of 1..16, got {uc_id!r}")


def resolve_bearings(uc: UseCase, bearings_deg: Optional[Sequence[float]] = None) -> tuple[float, ...]:
    """Bearing grid for a sweep: explicit argument > use-case override > default."""
    if bearings_deg is None:
        bearings_deg = uc.bearings_deg if uc.bearings_deg is not None else DEFAULT_BEARINGS_DEG
    bearings = tuple(float(b) for b in bearings_deg)
    if len(bearings) == 0:
        raise UseCaseError("bearing grid must be non-empty")
    for b in bearings:
        if not (math.isfinite(b) and -90.0 < b < 90.0):
            raise UseCaseError(
                f"bearings_deg values must lie strictly inside (-90, 90), got {b!r}"
            )
    return bearings


def realization_axes(
    uc: UseCase, bearings_deg: Optional[Sequence[float]] = None
) -> tuple[tuple[float, ...], ...]:
    """The six enumeration axes in nesting order (outermost first)."""
    bearings = resolve_bearings(uc, bearings_deg)
    return (
        uc.h_bs_set,
        uc.h_ris_set,
        uc.h_ue_set,
        uc.d_bs_ris_set,
        uc.d_ris_ue_set,
        bearings,
    )


def realization_count(uc: UseCase, bearings_deg: Optional[Sequence[float]] = None) -> int:
    count = 1
    for axis in realization_axes(uc, bearings_deg):
        count *= len(axis)
    return count


def realization_param_table(
    uc: UseCase, bearings_deg: Optional[Sequence[float]] = None
) -> np.ndarray:
    """All realization parameters as a (count, 6) array in id order.

    Columns: h_bs, h_ris, h_ue, d_bs_ris, d_ris_ue, bearing_ue_deg.
    Row index equals realization_id.
    """
    axes = realization_axes(uc, bearings_deg)
    grids = np.meshgrid(*[np.asarray(a, dtype=float) for a in axes], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def enumerate_realizations(
    uc: UseCase, bearings_deg: Optional[Sequence[float]] = None
) -> Iterator[ScenarioRealization]:
    """Stream all realizations of a use case in deterministic id order.

    The product nests h_bs (outermost) over h_ris, h_ue, d_bs_ris, d_ris_ue,
    and bearings (innermost); ids are dense from 0. Realizations whose
    geometry ends up shadowed are kept and contribute zero-power samples.
    """
    radio = uc.radio_params()
    noise = uc.noise_params()
    table = realization_param_table(uc, bearings_deg)
    for rid in range(table.shape[0]):
        h_bs, h_ris, h_ue, d_bs, d_ue, bearing = (float(v) for v in table[rid])
        geom = ScenarioGeometryInput(
            h_bs=h_bs,
            h_ris=h_ris,
            h_ue=h_ue,
            d_bs_ris=d_bs,
            d_ris_ue=d_ue,
            bearing_bs_deg=0.0,
            bearing_ue_deg=bearing,
        )
        yield ScenarioRealization(geometry=geom, radio=radio, noise=noise, realization_id=rid)


_REQUIRED_KEYS = (
    "name",
    "p_t_dbm",
    "f_c_mhz",
    "b_ue_khz",
    "h_bs_set",
    "h_ris_set",
    "h_ue_set",
    "d_bs_ris_set",
    "d_ris_ue_set",
)
_OPTIONAL_KEYS = (
    "g_t_dbi",
    "g_r_dbi",
    "f_n_db",
    "ple_t",
    "ple_r",
    "q_pattern",
    "bearings_deg",
)
_SET_KEYS = ("h_bs_set", "h_ris_set", "h_ue_set", "d_bs_ris_set", "d_ris_ue_set")


def load_usecase(doc: Mapping, usecase_id: int = CUSTOM_ID_FLOOR) -> UseCase:
    """Validate a use-case config document and build a custom UseCase.

    The document is strict JSON-object data: required keys are the radio
    scalars plus the five value sets; unknown keys are errors; custom ids
    start at 100 so they never collide with the built-in catalog.
    """
    if usecase_id < CUSTOM_ID_FLOOR:
        raise UseCaseError(
            f"custom usecase ids must be >= {CUSTOM_ID_FLOOR}, got {usecase_id!r}"
        )
    unknown = sorted(set(doc) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
    if unknown:
        raise UseCaseError(f"unknown keys in use-case config: {', '.join(unknown)}")
    missing = sorted(set(_REQUIRED_KEYS) - set(doc))
    if missing:
        raise UseCaseError(f"missing required keys: {', '.join(missing)}")
    if not isinstance(doc["name"], str) or not doc["name"]:
        raise UseCaseError("name must be a non-empty string")
    for key in _SET_KEYS:
        values = doc[key]
        if not isinstance(values, (list, tuple)):
            raise UseCaseError(f"{key} must be a list of numbers")
        if len(values) == 0:
            raise UseCaseError(f"{key} must be non-empty")
        for v in values:
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise UseCaseError(f"{key} entries must be numbers, got {v!r}")
            if not (math.isfinite(v) and v > 0):
                raise UseCaseError(f"{key} entries must be positive, got {v!r}")
    scalars = {}
    for key in ("p_t_dbm", "f_c_mhz", "b_ue_khz") + tuple(
        k for k in _OPTIONAL_KEYS if k != "bearings_deg" and k in doc
    ):
        v = doc[key]
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise UseCaseError(f"{key} must be a finite number, got {v!r}")
        scalars[key] = float(v)
    bearings = None
    if "bearings_deg" in doc:
        raw = doc["bearings_deg"]
        if not isinstance(raw, (list, tuple)) or len(raw) == 0:
            raise UseCaseError("bearings_deg must be a non-empty list of degrees")
        bearings = tuple(float(b) for b in raw)
        for b in bearings:
            if not (math.isfinite(b) and -90.0 < b < 90.0):
                raise UseCaseError(
                    f"bearings_deg values must lie strictly inside (-90, 90), got {b!r}"
                )
    try:
        return UseCase(
            id=usecase_id,
            name=doc["name"],
            p_t_dbm=scalars["p_t_dbm"],
            f_c_mhz=scalars["f_c_mhz"],
            b_ue_khz=scalars["b_ue_khz"],
            h_bs_set=tuple(float(v) for v in doc["h_bs_set"]),
            h_ris_set=tuple(float(v) for v in doc["h_ris_set"]),
            h_ue_set=tuple(float(v) for v in doc["h_ue_set"]),
            d_bs_ris_set=tuple(float(v) for v in doc["d_bs_ris_set"]),
            d_ris_ue_set=tuple(float(v) for v in doc["d_ris_ue_set"]),
            g_t_dbi=scalars.get("g_t_dbi", DEFAULT_G_T_DBI),
            g_r_dbi=scalars.get("g_r_dbi", DEFAULT_G_R_DBI),
            f_n_db=scalars.get("f_n_db", DEFAULT_F_N_DB),
            ple_t=scalars.get("ple_t", DEFAULT_PLE),
            ple_r=scalars.get("ple_r", DEFAULT_PLE),
            q_pattern=scalars.get("q_pattern", DEFAULT_Q_PATTERN),
            bearings_deg=bearings,
        )
    except (ValueError, GeometryError) as exc:
        raise UseCaseError(str(exc)) from exc
