"""Command-line front end: list-usecases | sweep | size | pdf | replay.

Human-readable tables go to stdout; machine artifacts (pool CSVs, summary,
sizing, PDF, and replay files) are written atomically into the output
directory. Exit codes: 0 success, 2 usage/config error, 3 runtime/data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__, artifacts, engine, replay as replay_mod
from .artifacts import SCHEMA_VERSION, TOOL_NAME
from .catalog import (
    UseCase,
    UseCaseError,
    builtin_usecases,
    get_usecase,
    load_usecase,
    realization_param_table,
    resolve_bearings,
)
from .engine import (
    DEFAULT_EPSILON,
    DEFAULT_SIZE_LADDER,
    DEFAULT_THRESHOLDS_DB,
    Criterion,
    EngineError,
    KpiPool,
)
from .geometry import GeometryError, Vec3, cos_sin_deg
from .link import NoiseParams, from_db
from .replay import ReplayError, SceneTemplate
from .scattering import CONTINUOUS, DEFAULT_CELL_FILL, RadioParams, RisPanel

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

DEFAULT_OUT = "out"


class ConfigError(ValueError):
    """Unusable command line or config input (exit code 2)."""


def _parse_sizes(text: str) -> list[tuple[int, int]]:
    sizes = []
    for token in text.split(","):
        token = token.strip().lower()
        parts = token.split("x")
        if len(parts) != 2:
            raise ConfigError(f"--sizes entries must look like 20x20, got {token!r}")
        try:
            n_v, n_h = int(parts[0]), int(parts[1])
        except ValueError:
            raise ConfigError(f"--sizes entries must be integers, got {token!r}") from None
        if n_v < 1 or n_h < 1:
            raise ConfigError(f"--sizes entries must be >= 1x1, got {token!r}")
        sizes.append((n_v, n_h))
    if not sizes:
        raise ConfigError("--sizes must name at least one panel size")
    return sizes


def _parse_bearings(text: str) -> tuple[float, ...]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError("--bearings range form is start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"--bearings range must be numeric, got {text!r}") from None
        if step <= 0:
            raise ConfigError("--bearings step must be > 0")
        values = np.arange(start, stop + step / 2.0, step)
        return tuple(float(v) for v in values)
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise ConfigError(f"--bearings must be degrees, got {text!r}") from None


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise ConfigError(f"{flag} must be a comma-separated number list, got {text!r}") from None
    if not values:
        raise ConfigError(f"{flag} must not be empty")
    return values


def _parse_k_phi(text: str) -> Optional[int]:
    if text.strip().lower() == "continuous":
        return CONTINUOUS
    try:
        k = int(text)
    except ValueError:
        raise ConfigError(f"--k-phi must be an integer or 'continuous', got {text!r}") from None
    if k < 1:
        raise ConfigError("--k-phi must be >= 1")
    return k


def _parse_size(text: str) -> tuple[int, int]:
    sizes = _parse_sizes(text)
    if len(sizes) != 1:
        raise ConfigError(f"--size takes one NxM value, got {text!r}")
    return sizes[0]


def _resolve_out(args) -> str:
    if args.out is not None:
        return args.out
    return os.environ.get("RIS_SIZER_OUT", DEFAULT_OUT)


def _resolve_usecase(args) -> UseCase:
    if getattr(args, "usecase", None) is not None and getattr(args, "usecase_file", None):
        raise ConfigError("give either --usecase or --usecase-file, not both")
    if getattr(args, "usecase", None) is not None:
        return get_usecase(args.usecase)
    if getattr(args, "usecase_file", None):
        try:
            with open(args.usecase_file, "r", encoding="utf-8") as handle:
                doc = json.load(handle)
        except FileNotFoundError:
            raise ConfigError(f"usecase file not found: {args.usecase_file}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"usecase file is not valid JSON: {exc}") from None
        return load_usecase(doc, usecase_id=args.usecase_id)
    raise ConfigError("one of --usecase or --usecase-file is required")


def _model_dict(uc: UseCase, k_phi: Optional[int], e_b: float, cell_fill: float) -> dict:
    return {
        "g_t_dbi": uc.g_t_dbi,
        "g_r_dbi": uc.g_r_dbi,
        "f_n_db": uc.f_n_db,
        "ple_t": uc.ple_t,
        "ple_r": uc.ple_r,
        "q_pattern": uc.q_pattern,
        "t_s_k": uc.t_s_k,
        "e_b": e_b,
        "k_phi": "continuous" if k_phi is CONTINUOUS else int(k_phi),
        "cell_fill": cell_fill,
    }


def _run_config(uc: UseCase, args, sizes, bearings, thresholds) -> dict:
    """Data-defining inputs embedded in every artifact. Scheduling knobs
    (workers) and output paths are deliberately excluded so reruns produce
    byte-identical files."""
    return {
        "schema_version": SCHEMA_VERSION,
        "usecase_id": uc.id,
        "usecase": uc.to_config(),
        "model": _model_dict(uc, args.k_phi, args.e_b, DEFAULT_CELL_FILL),
        "sizes": [[n_v, n_h] for n_v, n_h in sizes],
        "bearings_deg": list(bearings),
        "thresholds_db": list(thresholds),
        "seed": args.seed,
    }


def _add_sweep_args(sp: argparse.ArgumentParser, with_thresholds: bool = True) -> None:
    sp.add_argument("--usecase", type=int, help="built-in use-case id (1..16)")
    sp.add_argument("--usecase-file", help="path to a custom use-case JSON document")
    sp.add_argument(
        "--usecase-id", type=int, default=100, help="id assigned to --usecase-file (>= 100)"
    )
    sp.add_argument(
        "--sizes",
        default=",".join(f"{v}x{h}" for v, h in DEFAULT_SIZE_LADDER),
        help="comma-separated panel sizes, e.g. 10x10,20x20",
    )
    sp.add_argument("--bearings", default=None, help="degrees: list 0,5,10 or range -60:60:5")
    sp.add_argument("--k-phi", default="2", help="phase-state count or 'continuous'")
    sp.add_argument("--e-b", type=float, default=1.0, help="symbol-energy scale (linear)")
    if with_thresholds:
        sp.add_argument(
            "--thresholds-db",
            default=",".join(f"{t:g}" for t in DEFAULT_THRESHOLDS_DB),
            help="SNR thresholds in dB for outage/sizing",
        )
    sp.add_argument("--seed", type=int, default=0, help="run seed recorded in artifacts")
    sp.add_argument("--workers", type=int, default=1, help="worker processes (never changes outputs)")
    sp.add_argument("--out", default=None, help=f"output directory (default ${{RIS_SIZER_OUT}} or '{DEFAULT_OUT}')")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Scenario sweeps, KPI statistics, and minimum panel sizes "
        "for reconfigurable-surface-assisted links.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    lu = sub.add_parser("list-usecases", help="print the built-in use-case catalog")
    lu.add_argument("--filter", default=None, help="case-insensitive name substring")
    lu.add_argument("--format", choices=("table", "csv", "json"), default="table")

    sw = sub.add_parser("sweep", help="evaluate pools for each panel size")
    _add_sweep_args(sw)

    sz = sub.add_parser("size", help="minimum panel size per SNR threshold")
    _add_sweep_args(sz)
    sz.add_argument(
        "--criterion",
        choices=tuple(c.value for c in Criterion),
        default=Criterion.MEAN_SNR.value,
    )
    sz.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON, help="outage bound")

    pd = sub.add_parser("pdf", help="density histograms from existing pool CSVs")
    pd.add_argument("--pool", nargs="+", required=True, help="pool CSV file(s)")
    pd.add_argument("--bins", type=int, default=None, help="bin count (default: data-driven)")
    pd.add_argument("--out", default=None)

    rp = sub.add_parser("replay", help="per-point SNR curves along a UE trajectory")
    rp.add_argument("--trajectory", default=None, help="trajectory CSV (default: bundled example)")
    rp.add_argument("--ple", default="2,1.785", help="comma-separated path-loss exponents")
    rp.add_argument("--measurements", default=None, help="CSV with a measured snr_db column")
    rp.add_argument("--f-c-mhz", type=float, default=26000.0)
    rp.add_argument("--p-t-dbm", type=float, default=40.0)
    rp.add_argument("--h-bs", type=float, default=88.7)
    rp.add_argument("--h-ris", type=float, default=64.0)
    rp.add_argument("--d-bs-ris", type=float, default=80.0)
    rp.add_argument("--bearing-bs", type=float, default=0.0)
    rp.add_argument("--size", default="64x64", help="panel size NxM")
    rp.add_argument("--bw-khz", type=float, default=8640.0)
    rp.add_argument("--f-n-db", type=float, default=7.0)
    rp.add_argument("--g-t-dbi", type=float, default=10.0)
    rp.add_argument("--g-r-dbi", type=float, default=0.0)
    rp.add_argument("--q-pattern", type=float, default=2.0)
    rp.add_argument("--k-phi", default="2")
    rp.add_argument("--e-b", type=float, default=1.0)
    rp.add_argument("--out", default=None)
    return parser


def _print_table(rows: list[list[str]], header: list[str]) -> None:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    print(fmt.format(*header))
    print(fmt.format(*("-" * w for w in widths)))
    for row in rows:
        print(fmt.format(*row))


def _set_text(values) -> str:
    return "/".join(f"{v:g}" for v in values)


def cmd_list_usecases(args) -> int:
    cases = builtin_usecases()
    if args.filter:
        needle = args.filter.lower()
        cases = [uc for uc in cases if needle in uc.name.lower()]
    if args.format == "json":
        docs = [{"id": uc.id, **uc.to_config()} for uc in cases]
        print(json.dumps(artifacts.json_ready(docs), indent=2, sort_keys=True))
        return EXIT_OK
    header = ["id", "name", "p_t_dbm", "f_c_mhz", "b_ue_khz",
              "h_bs_m", "h_ris_m", "h_ue_m", "d_bs_ris_m", "d_ris_ue_m"]
    rows = [
        [str(uc.id), uc.name, f"{uc.p_t_dbm:g}", f"{uc.f_c_mhz:g}", f"{uc.b_ue_khz:g}",
         _set_text(uc.h_bs_set), _set_text(uc.h_ris_set), _set_text(uc.h_ue_set),
         _set_text(uc.d_bs_ris_set), _set_text(uc.d_ris_ue_set)]
        for uc in cases
    ]
    if args.format == "csv":
        print(",".join(header))
        for row in rows:
            print(",".join(f'"{c}"' if "," in c else c for c in row))
    else:
        _print_table(rows, header)
    return EXIT_OK


def _pool_stats(pool: KpiPool, thresholds: Sequence[float]) -> dict:
    mean_mu_dbm = engine.mean_power_db(pool) + 30.0
    mean_snr = engine.mean_snr_db(pool)
    stats = {
        "n_v": pool.n_v,
        "n_h": pool.n_h,
        "n_elements": pool.n_elements,
        "sample_count": pool.n_samples,
        "shadow_fraction": pool.shadow_fraction,
        "mean_mu_dbm": mean_mu_dbm,
        "mean_gamma_db": mean_snr,
        "outage": {f"{th:g}": engine.outage_probability(pool, th) for th in thresholds},
        "histogram_mu_dbm": artifacts.histogram_dict(engine.estimate_pdf(pool.mu_dbm())),
        "histogram_gamma_db": artifacts.histogram_dict(engine.estimate_pdf(pool.gamma_db())),
    }
    return stats


def _sweep_common(args):
    """Shared config resolution for sweep/size; returns everything needed to
    compute or reuse pools."""
    uc = _resolve_usecase(args)
    sizes = _parse_sizes(args.sizes)
    bearings = resolve_bearings(
        uc, _parse_bearings(args.bearings) if args.bearings is not None else None
    )
    thresholds = _parse_float_list(args.thresholds_db, "--thresholds-db")
    args.k_phi = _parse_k_phi(args.k_phi)
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1")
    out_dir = _resolve_out(args)
    cfg = _run_config(uc, args, sizes, bearings, thresholds)
    return uc, sizes, bearings, thresholds, out_dir, cfg


def _write_pools(uc, pools, bearings, cfg, out_dir) -> list[dict]:
    params = realization_param_table(uc, bearings)
    entries = []
    for pool in pools:
        name = artifacts.pool_csv_name(uc.id, pool.n_v, pool.n_h)
        digest = artifacts.write_pool_csv(
            os.path.join(out_dir, name),
            pool,
            params,
            cfg["usecase"],
            cfg["model"],
            bearings,
        )
        entries.append({"file": name, "config_hash": digest})
    return entries


def _summary_payload(uc, pools, pool_entries, thresholds, cfg) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "sweep_summary",
        "tool": TOOL_NAME,
        "tool_version": __version__,
        "config": cfg,
        "usecase_id": uc.id,
        "usecase_name": uc.name,
        "thresholds_db": list(thresholds),
        "sizes": [
            {**_pool_stats(pool, thresholds), "pool": entry}
            for pool, entry in zip(pools, pool_entries)
        ],
    }


def _print_pool_table(pools, thresholds) -> None:
    header = ["size", "samples", "shadow", "mean_power_dbm", "mean_snr_db"] + [
        f"op@{th:g}dB" for th in thresholds
    ]
    rows = []
    for pool in pools:
        rows.append(
            [
                f"{pool.n_v}x{pool.n_h}",
                str(pool.n_samples),
                f"{pool.shadow_fraction:.3f}",
                f"{engine.mean_power_db(pool) + 30.0:.2f}",
                f"{engine.mean_snr_db(pool):.2f}",
            ]
            + [f"{engine.outage_probability(pool, th):.4f}" for th in thresholds]
        )
    _print_table(rows, header)


def cmd_sweep(args) -> int:
    uc, sizes, bearings, thresholds, out_dir, cfg = _sweep_common(args)
    pools = engine.run_sweep(
        uc,
        sizes,
        bearings_deg=bearings,
        k_phi=args.k_phi,
        e_b=args.e_b,
        workers=args.workers,
    )
    pool_entries = _write_pools(uc, pools, bearings, cfg, out_dir)
    summary_path = os.path.join(out_dir, artifacts.summary_json_name(uc.id))
    artifacts.atomic_write_text(
        summary_path, artifacts.pretty_json(_summary_payload(uc, pools, pool_entries, thresholds, cfg))
    )
    _print_pool_table(pools, thresholds)
    for entry in pool_entries:
        print(f"wrote {os.path.join(out_dir, entry['file'])}")
    print(f"wrote {summary_path}")
    return EXIT_OK


def _load_or_run_pools(uc, sizes, bearings, cfg, out_dir, args) -> tuple[list[KpiPool], list[dict]]:
    """Reuse cached pool CSVs whose config hash matches; compute the rest."""
    pools: list[Optional[KpiPool]] = [None] * len(sizes)
    entries: list[Optional[dict]] = [None] * len(sizes)
    missing = []
    for i, (n_v, n_h) in enumerate(sizes):
        name = artifacts.pool_csv_name(uc.id, n_v, n_h)
        path = os.path.join(out_dir, name)
        expected = artifacts.config_hash(
            artifacts.pool_config_payload(cfg["usecase"], cfg["model"], n_v, n_h, bearings)
        )
        if os.path.exists(path):
            meta, pool = artifacts.read_pool_csv(path)
            if meta.get("config_hash") == expected:
                pools[i] = pool
                entries[i] = {"file": name, "config_hash": expected, "cached": True}
                continue
        missing.append(i)
    if missing:
        fresh = engine.run_sweep(
            uc,
            [sizes[i] for i in missing],
            bearings_deg=bearings,
            k_phi=args.k_phi,
            e_b=args.e_b,
            workers=args.workers,
        )
        fresh_entries = _write_pools(uc, fresh, bearings, cfg, out_dir)
        for i, pool, entry in zip(missing, fresh, fresh_entries):
            pools[i] = pool
            entries[i] = entry
    return list(pools), list(entries)  # type: ignore[arg-type]


def cmd_size(args) -> int:
    uc, sizes, bearings, thresholds, out_dir, cfg = _sweep_common(args)
    ladder = sorted(sizes, key=lambda s: s[0] * s[1])
    counts = [v * h for v, h in ladder]
    if len(set(counts)) != len(counts):
        raise ConfigError("--sizes ladder entries must have distinct element counts")
    criterion = Criterion(args.criterion)
    if not (0.0 <= args.epsilon <= 1.0):
        raise ConfigError("--epsilon must lie in [0, 1]")
    pools, entries = _load_or_run_pools(uc, ladder, bearings, cfg, out_dir, args)
    result = engine.min_ris_size(pools, thresholds, criterion, args.epsilon)
    cfg = {**cfg, "criterion": criterion.value, "epsilon": args.epsilon}
    payload = artifacts.sizing_dict(result, cfg)
    payload["pools"] = entries
    path = os.path.join(out_dir, artifacts.sizing_json_name(uc.id))
    artifacts.atomic_write_text(path, artifacts.pretty_json(payload))
    rows = []
    for th, size in zip(result.thresholds_db, result.min_size_per_threshold):
        rows.append(
            [f"{th:g}", "NOT_ACHIEVABLE" if size is None else f"{size[0]}x{size[1]}"]
        )
    _print_table(rows, ["threshold_db", "min_size"])
    print(f"wrote {path}")
    return EXIT_OK


def cmd_pdf(args) -> int:
    out_dir = _resolve_out(args)
    if args.bins is not None and args.bins < 1:
        raise ConfigError("--bins must be >= 1")
    for pool_path in args.pool:
        if not os.path.exists(pool_path):
            raise ConfigError(f"pool file not found: {pool_path}")
        meta, pool = artifacts.read_pool_csv(pool_path)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "pdf",
            "tool": TOOL_NAME,
            "tool_version": __version__,
            "source": os.path.basename(pool_path),
            "source_config_hash": meta.get("config_hash"),
            "usecase_id": pool.usecase_id,
            "n_v": pool.n_v,
            "n_h": pool.n_h,
            "histogram_mu_dbm": artifacts.histogram_dict(
                engine.estimate_pdf(pool.mu_dbm(), bins=args.bins)
            ),
            "histogram_gamma_db": artifacts.histogram_dict(
                engine.estimate_pdf(pool.gamma_db(), bins=args.bins)
            ),
        }
        stem = os.path.splitext(os.path.basename(pool_path))[0]
        path = os.path.join(out_dir, f"pdf_{stem}.json")
        artifacts.atomic_write_text(path, artifacts.pretty_json(payload))
        print(f"wrote {path}")
    return EXIT_OK


def cmd_replay(args) -> int:
    out_dir = _resolve_out(args)
    k_phi = _parse_k_phi(args.k_phi)
    n_v, n_h = _parse_size(args.size)
    ple_list = _parse_float_list(args.ple, "--ple")
    trajectory_path = args.trajectory or replay_mod.BUNDLED_TRAJECTORY
    if not os.path.exists(trajectory_path):
        raise ConfigError(f"trajectory file not found: {trajectory_path}")
    trajectory, inline_measured = replay_mod.load_trajectory_csv(trajectory_path)
    measured = inline_measured
    if args.measurements:
        if not os.path.exists(args.measurements):
            raise ConfigError(f"measurement file not found: {args.measurements}")
        m_traj, m_values = replay_mod.load_trajectory_csv(args.measurements)
        if m_values is None:
            raise ConfigError("measurement file must carry an snr_db column")
        if len(m_traj) != len(trajectory):
            raise ConfigError(
                f"measurement point count {len(m_traj)} does not match trajectory {len(trajectory)}"
            )
        measured = m_values

    cos_b, sin_b = cos_sin_deg(args.bearing_bs)
    template = SceneTemplate(
        bs=Vec3(args.d_bs_ris * cos_b, args.d_bs_ris * sin_b, args.h_bs),
        ris_center=Vec3(0.0, 0.0, args.h_ris),
    )
    f_c = args.f_c_mhz * 1e6
    panel = RisPanel.half_wave(n_v, n_h, f_c, k_phi=k_phi)
    radio = RadioParams(
        f_c=f_c,
        p_t=from_db(args.p_t_dbm - 30.0),
        g_t=from_db(args.g_t_dbi),
        g_r=from_db(args.g_r_dbi),
        q_pattern=args.q_pattern,
    )
    noise = NoiseParams(bw=args.bw_khz * 1e3, f_n=from_db(args.f_n_db))
    curves = replay_mod.replay(template, panel, radio, noise, trajectory, ple_list, e_b=args.e_b)

    curves_path = os.path.join(out_dir, "replay_curves.csv")
    replay_mod.write_replay_csv(curves_path, template, trajectory, curves)
    print(f"wrote {curves_path}")
    if measured is not None:
        stats = {}
        for curve in curves:
            s = replay_mod.compare_with_measurements(curve, measured)
            stats[f"ple_{curve.ple:g}"] = {
                "bias_db": s.bias,
                "rmse_db": s.rmse,
                "spearman": s.spearman,
            }
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "replay_stats",
            "tool": TOOL_NAME,
            "tool_version": __version__,
            "trajectory": os.path.basename(trajectory_path),
            "points": len(trajectory),
            "stats": stats,
        }
        stats_path = os.path.join(out_dir, "replay_stats.json")
        artifacts.atomic_write_text(stats_path, artifacts.pretty_json(payload))
        print(f"wrote {stats_path}")
    return EXIT_OK


_COMMANDS = {
    "list-usecases": cmd_list_usecases,
    "sweep": cmd_sweep,
    "size": cmd_size,
    "pdf": cmd_pdf,
    "replay": cmd_replay,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, UseCaseError, ReplayError, GeometryError, ValueError) as exc:
        print(f"{TOOL_NAME}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EngineError as exc:
        print(f"{TOOL_NAME}: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"{TOOL_NAME}: i/o error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
