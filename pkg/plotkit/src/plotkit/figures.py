"""Figure builders: quench time series and light-cone heatmaps.

Both builders are pure renderers. They read schema v1 files, draw exactly
what the files contain, and never recompute physics; the only arithmetic
here is evaluating a stored front fit on a dense distance axis and applying
the requested display scale.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "plotkit"

import matplotlib.pyplot as plt
import numpy as np

from plotkit.io import (
    SchemaError,
    fit_for_alpha,
    read_front_fits,
    read_grid,
    read_summary,
    read_timeseries,
)

KINDS = ("timeseries", "heatmap")


@dataclass(frozen=True)
class FigureJob:
    """What to render: input files, figure kind, display options.

    ``scale`` multiplies the plotted observable (the usual figure style
    scales entropies by 10^2); ``threshold_contour`` toggles the front
    contour line on heatmaps.
    """

    inputs: tuple[Path, ...]
    kind: str
    scale: float = 1.0
    threshold_contour: bool = True

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SchemaError(f"figure kind must be one of {KINDS}, got {self.kind!r}")
        if not self.inputs:
            raise SchemaError("at least one input file is required")
        for path in self.inputs:
            if not Path(path).is_file():
                raise SchemaError(f"input file {path} does not exist")
        if not self.scale > 0:
            raise SchemaError(f"scale must be positive, got {self.scale}")


def _split_inputs(job: FigureJob) -> tuple[Path, Path | None]:
    """One CSV is mandatory, one JSON sidecar is optional."""
    csvs = [Path(p) for p in job.inputs if Path(p).suffix == ".csv"]
    jsons = [Path(p) for p in job.inputs if Path(p).suffix == ".json"]
    if len(csvs) != 1 or len(jsons) > 1 or len(csvs) + len(jsons) != len(job.inputs):
        raise SchemaError(
            "expected exactly one .csv input and at most one .json sidecar, "
            f"got {[str(p) for p in job.inputs]}"
        )
    return csvs[0], jsons[0] if jsons else None


def build_timeseries(job: FigureJob):
    """Overlaid per-N simulation curves with the dashed finite-size prediction."""
    csv_path, json_path = _split_inputs(job)
    curves = read_timeseries(csv_path)
    taus = {}
    if json_path is not None:
        summary = read_summary(json_path)
        taus = {N: run["tau"] for N, run in summary.items() if "tau" in run}
    normalize = bool(taus) and all(c.N in taus for c in curves)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    prediction_labeled = False
    for curve in curves:
        x = curve.t / taus[curve.N] if normalize else curve.t
        (line,) = ax.plot(x, job.scale * curve.sim, label=curve.label, linewidth=1.4)
        ax.plot(
            x,
            job.scale * curve.pred_finite,
            linestyle="--",
            color=line.get_color(),
            linewidth=1.0,
            alpha=0.85,
            label="prediction" if not prediction_labeled else "_nolegend_",
        )
        prediction_labeled = True
    if normalize:
        ax.axvspan(0.0, 1.0, color="0.85", zorder=0, label="t < tau")
        ax.set_xlabel("t / tau")
    else:
        ax.set_xlabel("t")
    suffix = f" x {job.scale:g}" if job.scale != 1.0 else ""
    ax.set_ylabel("Renyi-2 observable" + suffix)
    ax.legend(loc="best", fontsize=8)
    ax.margins(x=0)
    fig.tight_layout()
    return fig


def _evaluate_front(model: str, params: dict, d: np.ndarray) -> np.ndarray:
    """Arrival-time curve of a stored fit; mirrors the producer's catalog."""
    if model == "Constant":
        return np.full_like(d, params["b"])
    if model == "Linear":
        return params["a"] * d + params["b"]
    if model == "Logarithmic":
        return params["a"] * np.log(d) + params["b"]
    if model == "Algebraic":
        return params["a"] * d ** params["gamma"] + params["b"]
    raise SchemaError(f"unknown front model {model!r} in fit report")


def build_heatmap(job: FigureJob):
    """Threshold-masked (distance, time) map with the fitted front overlay."""
    csv_path, json_path = _split_inputs(job)
    grid = read_grid(csv_path)
    fit = None
    if json_path is None:
        warnings.warn("no front-fit report given; rendering heatmap without overlay")
    else:
        fit = fit_for_alpha(read_front_fits(json_path), grid.alpha)
        if fit is None:
            warnings.warn(
                f"fit report has no entry for alpha={grid.alpha:g}; no overlay"
            )

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.set_facecolor("0.9")
    masked = np.ma.masked_less(grid.values, grid.threshold)
    mesh = ax.pcolormesh(
        grid.distances, grid.times, job.scale * masked, shading="nearest", cmap="viridis"
    )
    fig.colorbar(mesh, ax=ax, label="I2" + (f" x {job.scale:g}" if job.scale != 1 else ""))

    if job.threshold_contour and grid.values.max() >= grid.threshold:
        ax.contour(
            grid.distances,
            grid.times,
            grid.values,
            levels=[grid.threshold],
            colors="white",
            linewidths=0.8,
        )

    if fit is not None and fit.get("model"):
        arrivals = np.asarray(fit.get("arrivals", []), dtype=float)
        if arrivals.size:
            ax.plot(arrivals[:, 0], arrivals[:, 1], "w.", markersize=5)
        dense = np.linspace(grid.distances.min(), grid.distances.max(), 200)
        ax.plot(
            dense,
            _evaluate_front(fit["model"], fit["params"], dense),
            "w--",
            linewidth=1.2,
            label=fit["model"],
        )
        ax.legend(loc="upper left", fontsize=9)

    ax.set_xlabel("distance d")
    ax.set_ylabel("t")
    ax.set_title(f"alpha = {grid.alpha:g}")
    ax.set_ylim(grid.times.min(), grid.times.max())
    fig.tight_layout()
    return fig


def _save(fig, out: Path) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.suffix == ".svg":
        # Drop the creation date so identical inputs give identical bytes.
        fig.savefig(out, metadata={"Date": None})
    else:
        fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def plot_timeseries(job: FigureJob, out: Path) -> Path:
    """Render a quench time-series figure to ``out`` (PNG or SVG)."""
    return _save(build_timeseries(job), out)


def plot_heatmap(job: FigureJob, out: Path) -> Path:
    """Render a light-cone heatmap figure to ``out`` (PNG or SVG)."""
    return _save(build_heatmap(job), out)
