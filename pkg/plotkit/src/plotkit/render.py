"""Figure rendering for the six plotkit chart kinds.

Inputs are never mutated; output is a PNG whose caption and metadata embed
the SHA-256 of every source file, so a figure can always be traced back to
the exact artifacts it was drawn from.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import readers  # noqa: E402
from .readers import InputError  # noqa: E402

FIGURE_KINDS = (
    "pdf_power",
    "pdf_snr",
    "mean_vs_size",
    "op_vs_size",
    "min_size_bars",
    "replay_curves",
)

_THEME = os.path.join(os.path.dirname(__file__), "theme.mplstyle")


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise InputError(
                f"unknown figure kind {self.kind!r}; expected one of {', '.join(FIGURE_KINDS)}"
            )
        if not self.inputs:
            raise InputError("at least one input file is required")
        for path in self.inputs:
            if not os.path.exists(path):
                raise InputError(f"input file not found: {path}")
        object.__setattr__(self, "inputs", tuple(self.inputs))


@dataclass(frozen=True)
class RenderResult:
    path: str
    sources: tuple[str, ...]
    meta: dict = field(default_factory=dict)


def _fd_edges(values: np.ndarray) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return np.array([lo - 0.5, lo + 0.5])
    q75, q25 = np.percentile(values, [75.0, 25.0])
    width = 2.0 * (q75 - q25) * values.size ** (-1.0 / 3.0)
    bins = int(math.ceil((hi - lo) / width)) if width > 0 else 1
    return np.linspace(lo, hi, max(bins, 1) + 1)


def _density_step(ax, samples_db: np.ndarray, label: str):
    finite = samples_db[samples_db != -np.inf]
    if finite.size == 0:
        raise InputError(f"{label}: all samples are shadowed; no density to draw")
    edges = _fd_edges(finite)
    counts, _ = np.histogram(finite, edges)
    density = counts / (counts.sum() * np.diff(edges))
    ax.stairs(density, edges, label=label, fill=False)
    return float(np.mean(samples_db == -np.inf))


def _size_label(entry_or_pool) -> str:
    return f"{entry_or_pool['n_v']}x{entry_or_pool['n_h']}"


def _render_pdf(spec: FigureSpec, column: str, xlabel: str, title: str) -> RenderResult:
    fig, ax = plt.subplots()
    shadow_notes = []
    for path in spec.inputs:
        pool = readers.read_pool_csv(path)
        label = f"uc{pool['usecase_id']} {_size_label(pool)}"
        mass = _density_step(ax, pool[column], label)
        if mass > 0:
            shadow_notes.append(f"{label}: outage mass {mass:.3f}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("probability density")
    ax.set_title(title)
    ax.legend(loc="best")
    if shadow_notes:
        ax.text(
            0.02, 0.98, "shadowed point mass\n" + "\n".join(shadow_notes),
            transform=ax.transAxes, va="top", fontsize=7,
            bbox=dict(boxstyle="round", facecolor="white", alpha=0.8),
        )
    return _finish(fig, spec, {"n_traces": len(spec.inputs), "shadow_notes": shadow_notes})


def _render_mean_vs_size(spec: FigureSpec) -> RenderResult:
    fig, (ax_p, ax_s) = plt.subplots(1, 2, figsize=(8.4, 3.8))
    n_points = 0
    for path in spec.inputs:
        summary = readers.read_summary_json(path)
        sizes = summary["sizes"]
        n = [entry["n_elements"] for entry in sizes]
        label = f"uc{summary['usecase_id']}"
        ax_p.plot(n, [_as_db(e["mean_mu_dbm"]) for e in sizes], marker="o", label=label)
        ax_s.plot(n, [_as_db(e["mean_gamma_db"]) for e in sizes], marker="o", label=label)
        n_points += len(n)
    for ax, ylabel in ((ax_p, "mean received power [dBm]"), (ax_s, "mean SNR [dB]")):
        ax.set_xlabel("panel elements")
        ax.set_ylabel(ylabel)
        ax.set_xscale("log")
        ax.legend(loc="best")
    fig.suptitle("Average KPIs vs panel size")
    return _finish(fig, spec, {"n_points": n_points})


def _render_op_vs_size(spec: FigureSpec) -> RenderResult:
    fig, ax = plt.subplots()
    n_lines = 0
    for path in spec.inputs:
        summary = readers.read_summary_json(path)
        sizes = summary["sizes"]
        n = [entry["n_elements"] for entry in sizes]
        thresholds = summary.get("thresholds_db", [])
        for th in thresholds:
            key = f"{th:g}"
            ops = [entry["outage"][key] for entry in sizes]
            ax.plot(n, ops, marker="o", label=f"uc{summary['usecase_id']} @ {key} dB")
            n_lines += 1
    ax.set_xlabel("panel elements")
    ax.set_ylabel("outage probability")
    ax.set_xscale("log")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title("Outage vs panel size")
    ax.legend(loc="best", fontsize=7)
    return _finish(fig, spec, {"n_lines": n_lines})


def _render_min_size_bars(spec: FigureSpec) -> RenderResult:
    payloads = [readers.read_sizing_json(path) for path in spec.inputs]
    thresholds = sorted({e["threshold_db"] for p in payloads for e in p["entries"]})
    fig, ax = plt.subplots()
    group_width = 0.8
    bar_width = group_width / len(payloads)
    n_bars = 0
    top = 1.0
    blend = ax.get_xaxis_transform()  # x in data coords, y in axes fraction
    for i, payload in enumerate(payloads):
        entries = {e["threshold_db"]: e for e in payload["entries"]}
        xs, ys, labels = [], [], []
        for g, th in enumerate(thresholds):
            entry = entries.get(th)
            x = g - group_width / 2 + (i + 0.5) * bar_width
            if entry is None:
                continue
            if entry["status"] == "ok":
                count = entry["n_v"] * entry["n_h"]
                xs.append(x)
                ys.append(count)
                labels.append(f"{entry['n_v']}x{entry['n_h']}")
                top = max(top, count)
                n_bars += 1
            else:
                ax.text(
                    x, 0.03, "n/a", ha="center", va="bottom", fontsize=7,
                    rotation=90, transform=blend,
                )
        bars = ax.bar(xs, ys, width=bar_width * 0.9, label=f"uc{payload['usecase_id']}")
        for rect, text in zip(bars, labels):
            ax.text(
                rect.get_x() + rect.get_width() / 2, rect.get_height(), text,
                ha="center", va="bottom", fontsize=7,
            )
    ax.set_xticks(range(len(thresholds)))
    ax.set_xticklabels([f"{th:g} dB" for th in thresholds])
    ax.set_xlabel("SNR threshold")
    ax.set_ylabel("required elements")
    ax.set_yscale("log")
    ax.set_ylim(top=top * 3.0)  # headroom for the NxM labels above the bars
    ax.set_title("Minimum panel size per SNR threshold")
    ax.legend(loc="best")
    return _finish(
        fig, spec, {"n_threshold_groups": len(thresholds), "n_bars": n_bars}
    )


def _render_replay_curves(spec: FigureSpec) -> RenderResult:
    fig, ax = plt.subplots()
    n_curves = 0
    for path in spec.inputs:
        data = readers.read_replay_csv(path)
        for ple, snr in data["curves"].items():
            mask = snr != -np.inf
            ax.plot(data["distance_m"][mask], snr[mask], label=f"PLE {ple}")
            n_curves += 1
    ax.set_xlabel("distance from panel [m]")
    ax.set_ylabel("average SNR [dB]")
    ax.set_title("Replayed SNR along the trajectory")
    ax.legend(loc="best")
    return _finish(fig, spec, {"n_curves": n_curves})


def _as_db(value) -> float:
    return -np.inf if value == "-inf" else float(value)


def _finish(fig, spec: FigureSpec, meta: dict) -> RenderResult:
    sources = tuple(readers.source_tag(path) for path in spec.inputs)
    fig.text(0.01, 0.005, "src: " + "; ".join(sources), fontsize=6, alpha=0.75)
    fig.tight_layout(rect=(0, 0.02, 1, 1))
    out_dir = os.path.dirname(os.path.abspath(spec.output))
    os.makedirs(out_dir, exist_ok=True)
    fig.savefig(
        spec.output,
        format="png",
        metadata={"Description": "plotkit " + spec.kind + " | src: " + "; ".join(sources)},
    )
    plt.close(fig)
    return RenderResult(path=spec.output, sources=sources, meta=meta)


_RENDERERS = {
    "pdf_power": lambda spec: _render_pdf(
        spec, "mu_dbm", "received power [dBm]", "Received-power density"
    ),
    "pdf_snr": lambda spec: _render_pdf(
        spec, "gamma_db", "SNR [dB]", "SNR density"
    ),
    "mean_vs_size": _render_mean_vs_size,
    "op_vs_size": _render_op_vs_size,
    "min_size_bars": _render_min_size_bars,
    "replay_curves": _render_replay_curves,
}


def render(spec: FigureSpec) -> RenderResult:
    """Render one figure; deterministic for fixed inputs and versions."""
    with plt.style.context(_THEME):
        return _RENDERERS[spec.kind](spec)
