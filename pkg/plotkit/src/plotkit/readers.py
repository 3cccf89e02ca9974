"""Readers for the ris-sizer artifact schemas (schema_version 1).

plotkit never imports the simulator; these parse the documented on-disk
formats only. Shadowed samples arrive as the string "-inf".
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os

import numpy as np

SUPPORTED_SCHEMA = 1

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


class InputError(ValueError):
    """Unreadable or unsupported input artifact."""


def _parse_db(text: str) -> float:
    return -math.inf if text == "-inf" else float(text)


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _check_schema(value, path: str) -> None:
    if int(value) != SUPPORTED_SCHEMA:
        raise InputError(
            f"{path}: schema_version {value} is not supported (expected {SUPPORTED_SCHEMA})"
        )


def read_pool_csv(path: str) -> dict:
    """Pool samples plus header metadata: mu_dbm / gamma_db arrays with -inf
    for shadowed realizations."""
    meta = {}
    rows = []
    header = None
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for line in handle:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                meta[key] = value
                continue
            cells = next(csv.reader([line.strip()]))
            if header is None:
                header = tuple(cells)
                if header != POOL_COLUMNS:
                    raise InputError(f"{path}: unexpected pool columns {header}")
                continue
            if cells:
                rows.append(cells)
    if "schema_version" not in meta:
        raise InputError(f"{path}: missing schema_version header")
    _check_schema(meta["schema_version"], path)
    if not rows:
        raise InputError(f"{path}: pool has no samples")
    return {
        "path": path,
        "usecase_id": int(meta.get("usecase_id", 0)),
        "n_v": int(meta.get("n_v", 0)),
        "n_h": int(meta.get("n_h", 0)),
        "config_hash": meta.get("config_hash", ""),
        "mu_dbm": np.array([_parse_db(r[7]) for r in rows]),
        "gamma_db": np.array([_parse_db(r[8]) for r in rows]),
    }


def _read_json(path: str, expected_kind: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    if "schema_version" not in payload:
        raise InputError(f"{path}: missing schema_version")
    _check_schema(payload["schema_version"], path)
    if payload.get("kind") != expected_kind:
        raise InputError(
            f"{path}: kind {payload.get('kind')!r} is not {expected_kind!r}"
        )
    return payload


def read_summary_json(path: str) -> dict:
    payload = _read_json(path, "sweep_summary")
    if not payload.get("sizes"):
        raise InputError(f"{path}: summary carries no per-size entries")
    return payload


def read_sizing_json(path: str) -> dict:
    payload = _read_json(path, "sizing")
    if not payload.get("entries"):
        raise InputError(f"{path}: sizing carries no threshold entries")
    return payload


def read_replay_csv(path: str) -> dict:
    """Replay curves: label, distance_m, then one snr_db_ple_<value> column
    per exponent."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(line for line in handle if not line.startswith("#"))
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty replay file") from None
        if header[:2] != ["label", "distance_m"] or len(header) < 3:
            raise InputError(f"{path}: unexpected replay columns {header}")
        curve_names = header[2:]
        for name in curve_names:
            if not name.startswith("snr_db_ple_"):
                raise InputError(f"{path}: unexpected curve column {name!r}")
        labels = []
        distances = []
        curves = [[] for _ in curve_names]
        for row in reader:
            if not row:
                continue
            labels.append(row[0])
            distances.append(float(row[1]))
            for i, cell in enumerate(row[2:]):
                curves[i].append(_parse_db(cell))
    if not labels:
        raise InputError(f"{path}: replay file has no points")
    return {
        "path": path,
        "labels": labels,
        "distance_m": np.array(distances),
        "curves": {
            name.removeprefix("snr_db_ple_"): np.array(values)
            for name, values in zip(curve_names, curves)
        },
    }


def source_tag(path: str) -> str:
    return f"{os.path.basename(path)} sha256:{file_sha256(path)[:12]}"
