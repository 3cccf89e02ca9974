"""Noise floor, SNR, and decibel bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass

BOLTZMANN = 1.380649e-23  # J/K, exact SI value

NEG_INF_DB = float("-inf")


def to_db(x: float) -> float:
    """Linear power ratio to dB; 0 maps to the -inf sentinel."""
    if x < 0:
        raise ValueError(f"cannot convert negative power {x!r} to dB")
    if x == 0:
        return NEG_INF_DB
    return 10.0 * math.log10(x)


def from_db(db: float) -> float:
    if db == NEG_INF_DB:
        return 0.0
    return 10.0 ** (db / 10.0)


def watts_to_dbm(w: float) -> float:
    return to_db(w) + 30.0 if w > 0 else NEG_INF_DB


def dbm_to_watts(dbm: float) -> float:
    return from_db(dbm - 30.0)


@dataclass(frozen=True)
class NoiseParams:
    """Thermal noise model: N_o = k_B * T_s * BW * F_n."""

    bw: float
    t_s: float = 290.0
    f_n: float = 1.0
    k_b: float = BOLTZMANN

    def __post_init__(self):
        if not (self.t_s > 0):
            raise ValueError(f"t_s must be > 0 K, got {self.t_s!r}")
        if not (self.bw > 0):
            raise ValueError(f"bw must be > 0 Hz, got {self.bw!r}")
        if not (self.f_n >= 1):
            raise ValueError(f"f_n must be >= 1 (linear), got {self.f_n!r}")
        if self.k_b != BOLTZMANN:
            raise ValueError("k_b must equal the exact SI Boltzmann constant")


def noise_power(np_: NoiseParams) -> float:
    """Noise variance at the receive antenna, watts."""
    return np_.k_b * np_.t_s * np_.bw * np_.f_n


@dataclass(frozen=True)
class SnrSample:
    """One received-power sample with its linear and dB SNR."""

    mu: float
    gamma: float
    gamma_db: float


def snr(mu: float, e_b: float, n_o: float) -> SnrSample:
    """SNR of a received-power sample; mu = 0 (shadowed) yields the -inf sentinel."""
    if n_o <= 0:
        raise ValueError(f"n_o must be > 0 W, got {n_o!r}")
    if mu < 0:
        raise ValueError(f"mu must be >= 0 W, got {mu!r}")
    gamma = mu * e_b / n_o
    return SnrSample(mu=mu, gamma=gamma, gamma_db=to_db(gamma))
