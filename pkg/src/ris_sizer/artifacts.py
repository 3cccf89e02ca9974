"""Versioned file artifacts: pool CSVs, summary/sizing JSON, atomic writes.

All machine outputs carry schema_version, tool version, and the resolved
run configuration. Scheduling knobs (worker count, output paths) are not part
of the embedded config so identical data always serializes to identical
bytes. Shadowed samples serialize as the string "-inf".
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from typing import Mapping, Optional, Sequence

import numpy as np

from . import __version__
from .engine import Histogram, KpiPool, SizingResult

SCHEMA_VERSION = 1
TOOL_NAME = "ris-sizer"

POOL_COLUMNS = (
    "realization_id",
    "h_bs_m",
    "h_ris_m",
    "h_ue_m",
    "d_bs_ris_m",
    "d_ris_ue_m",
    "bearing_deg",
    "mu_dbm",
    "gamma_db",
)


def json_ready(obj):
    """Recursively convert to plain JSON data; -inf becomes the string "-inf"."""
    if isinstance(obj, Mapping):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if v == -math.inf:
            return "-inf"
        if not math.isfinite(v):
            raise ValueError(f"cannot serialize {v!r}")
        return v
    return obj


def canonical_json(obj) -> str:
    return json.dumps(json_ready(obj), sort_keys=True, separators=(",", ":"))


def pretty_json(obj) -> str:
    return json.dumps(json_ready(obj), sort_keys=True, indent=2) + "\n"


def config_hash(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def parse_db(text: str) -> float:
    return -math.inf if text == "-inf" else float(text)


def format_float(v: float) -> str:
    """Shortest round-trip decimal form; -inf uses the sentinel string."""
    v = float(v)
    if v == -math.inf:
        return "-inf"
    return repr(v)


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def pool_csv_name(usecase_id: int, n_v: int, n_h: int) -> str:
    return f"pool_uc{usecase_id}_{n_v}x{n_h}.csv"


def summary_json_name(usecase_id: int) -> str:
    return f"summary_uc{usecase_id}.json"


def sizing_json_name(usecase_id: int) -> str:
    return f"sizing_uc{usecase_id}.json"


def pool_config_payload(
    usecase_doc: Mapping, model: Mapping, n_v: int, n_h: int, bearings_deg: Sequence[float]
) -> dict:
    """Content-hash payload identifying one pool: use case, ladder entry,
    bearing grid, and resolved model constants."""
    return {
        "schema_version": SCHEMA_VERSION,
        "usecase": dict(usecase_doc),
        "model": dict(model),
        "n_v": int(n_v),
        "n_h": int(n_h),
        "bearings_deg": list(bearings_deg),
    }


def write_pool_csv(
    path: str,
    pool: KpiPool,
    params: np.ndarray,
    usecase_doc: Mapping,
    model: Mapping,
    bearings_deg: Sequence[float],
) -> str:
    """Emit one sample per row with its scenario parameters. `params` is the
    (n_samples, 6) realization parameter table aligned with the pool ids.
    Returns the pool's config hash."""
    if params.shape != (pool.n_samples, 6):
        raise ValueError("params table must align with the pool samples")
    payload = pool_config_payload(usecase_doc, model, pool.n_v, pool.n_h, bearings_deg)
    digest = config_hash(payload)
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    buf.write("# kind: kpi_pool\n")
    buf.write(f"# tool: {TOOL_NAME} {__version__}\n")
    buf.write(f"# usecase_id: {pool.usecase_id}\n")
    buf.write(f"# n_v: {pool.n_v}\n")
    buf.write(f"# n_h: {pool.n_h}\n")
    buf.write("# shadow_policy: shadowed samples kept as zero power and counted as outage\n")
    buf.write(f"# config_hash: {digest}\n")
    buf.write(f"# config: {canonical_json(payload)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(POOL_COLUMNS)
    mu_dbm = pool.mu_dbm()
    gamma_db = pool.gamma_db()
    for i in range(pool.n_samples):
        writer.writerow(
            [int(pool.realization_ids[i])]
            + [format_float(v) for v in params[i]]
            + [format_float(mu_dbm[i]), format_float(gamma_db[i])]
        )
    atomic_write_text(path, buf.getvalue())
    return digest


def read_pool_csv(path: str) -> tuple[dict, KpiPool]:
    """Load a pool CSV back into metadata and a KpiPool (powers rebuilt from
    the dB columns, so equality holds to round-trip precision)."""
    meta: dict = {}
    rows: list[list[str]] = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        header: Optional[list[str]] = None
        for line in handle:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                meta[key] = value
                continue
            stripped = line.strip()
            if not stripped:
                continue
            cells = next(csv.reader([stripped]))
            if header is None:
                header = cells
                if tuple(header) != POOL_COLUMNS:
                    raise ValueError(f"unexpected pool columns in {path}: {header}")
                continue
            rows.append(cells)
    if "config" in meta:
        meta["config"] = json.loads(meta["config"])
    for key in ("usecase_id", "n_v", "n_h", "schema_version"):
        if key in meta:
            meta[key] = int(meta[key])
    ids = np.array([int(r[0]) for r in rows], dtype=np.int64)
    params = np.array([[float(v) for v in r[1:7]] for r in rows])
    mu_dbm = np.array([parse_db(r[7]) for r in rows])
    gamma_db = np.array([parse_db(r[8]) for r in rows])
    mu_w = np.where(mu_dbm == -np.inf, 0.0, np.power(10.0, (mu_dbm - 30.0) / 10.0))
    gamma = np.where(gamma_db == -np.inf, 0.0, np.power(10.0, gamma_db / 10.0))
    pool = KpiPool(
        usecase_id=meta.get("usecase_id", 0),
        n_v=meta.get("n_v", 0),
        n_h=meta.get("n_h", 0),
        realization_ids=ids,
        mu_w=mu_w,
        gamma_lin=gamma,
    )
    meta["params"] = params
    return meta, pool


def histogram_dict(h: Histogram) -> dict:
    return {
        "edges": list(h.edges),
        "counts": [int(c) for c in h.counts],
        "density": bool(h.density),
        "shadow_mass": h.shadow_mass,
        "n_samples": h.n_samples,
    }


def sizing_dict(result: SizingResult, config: Mapping) -> dict:
    entries = []
    for th, size in zip(result.thresholds_db, result.min_size_per_threshold):
        if size is None:
            entries.append({"threshold_db": th, "status": "not_achievable"})
        else:
            entries.append(
                {"threshold_db": th, "status": "ok", "n_v": size[0], "n_h": size[1]}
            )
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "sizing",
        "tool": TOOL_NAME,
        "tool_version": __version__,
        "config": dict(config),
        "usecase_id": result.usecase_id,
        "criterion": result.criterion.value,
        "epsilon": result.epsilon,
        "entries": entries,
    }
