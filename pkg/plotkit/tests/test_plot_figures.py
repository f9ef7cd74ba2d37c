"""Figure builders: content checks on the matplotlib artists, not pixels."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from schemafiles import (
    linear_cone,
    write_fits_json,
    write_grid_csv,
    write_quench_csv,
    write_summary_json,
)
from plotkit.figures import (
    FigureJob,
    build_heatmap,
    build_timeseries,
    plot_heatmap,
    plot_timeseries,
)
from plotkit.io import SchemaError


def quench_files(tmp_path):
    t = np.linspace(0.0, 12.0, 25)
    curves = {
        "S2[N=4]": (t, 0.1 * t, 0.1 * t + 0.01, 0.1 * t + 0.02),
        "S2[N=8]": (t, 0.2 * t, 0.2 * t + 0.01, 0.2 * t + 0.02),
    }
    csv = write_quench_csv(tmp_path / "quench.csv", curves)
    summary = write_summary_json(
        tmp_path / "quench_summary.json", [{"N": 4, "tau": 2.0}, {"N": 8, "tau": 4.0}]
    )
    return csv, summary


def cone_files(tmp_path, model="Linear", params=None, alpha=2.0):
    times = np.linspace(0.0, 1.0, 41)
    seps = np.arange(5)
    values = linear_cone(times, seps)
    csv = write_grid_csv(tmp_path / "grid.csv", times, seps, values, alpha=alpha)
    fits = write_fits_json(
        tmp_path / "front_fits.json",
        [
            {
                "alpha": alpha,
                "model": model,
                "params": params or {"a": 1 / 1.2, "b": 0.0},
                "arrivals": [[(m + 1) * 0.1, (m + 1) * 0.1 / 1.2] for m in seps],
            }
        ],
    )
    return csv, fits


def test_job_validation(tmp_path):
    csv, _ = quench_files(tmp_path)
    with pytest.raises(SchemaError, match="kind"):
        FigureJob((csv,), "piechart")
    with pytest.raises(SchemaError, match="does not exist"):
        FigureJob((tmp_path / "missing.csv",), "timeseries")
    with pytest.raises(SchemaError, match="input file"):
        FigureJob((), "timeseries")
    with pytest.raises(SchemaError, match="scale"):
        FigureJob((csv,), "timeseries", scale=0.0)


def test_timeseries_overlays_curves_and_band(tmp_path):
    csv, summary = quench_files(tmp_path)
    fig = build_timeseries(FigureJob((csv, summary), "timeseries"))
    ax = fig.axes[0]
    # two sim curves + two dashed predictions
    assert len(ax.lines) == 4
    labels = [text.get_text() for text in ax.get_legend().get_texts()]
    assert "S2[N=4]" in labels and "S2[N=8]" in labels
    assert "prediction" in labels
    # the tau band is drawn and time is normalized per N: both curves end at 3
    assert len(ax.patches) == 1
    assert ax.lines[0].get_xdata()[-1] == pytest.approx(6.0)
    assert ax.lines[2].get_xdata()[-1] == pytest.approx(3.0)


def test_timeseries_without_summary_uses_raw_time(tmp_path):
    csv, _ = quench_files(tmp_path)
    fig = build_timeseries(FigureJob((csv,), "timeseries"))
    ax = fig.axes[0]
    assert ax.get_xlabel() == "t"
    assert len(ax.patches) == 0
    assert ax.lines[0].get_xdata()[-1] == pytest.approx(12.0)


def test_timeseries_scale_is_pure_axis_scaling(tmp_path):
    csv, summary = quench_files(tmp_path)
    fig1 = build_timeseries(FigureJob((csv, summary), "timeseries", scale=1.0))
    fig100 = build_timeseries(FigureJob((csv, summary), "timeseries", scale=100.0))
    for l1, l100 in zip(fig1.axes[0].lines, fig100.axes[0].lines):
        assert_allclose(l100.get_ydata(), 100.0 * l1.get_ydata())
    assert "x 100" in fig100.axes[0].get_ylabel()


def test_timeseries_empty_csv_writes_nothing(tmp_path):
    csv = tmp_path / "empty.csv"
    csv.write_text("# ota-sim schema v1\nt,sim_value,pred_finite,pred_infinite,observable\n")
    out = tmp_path / "fig.png"
    with pytest.raises(SchemaError, match="no data rows"):
        plot_timeseries(FigureJob((csv,), "timeseries"), out)
    assert not out.exists()


def test_heatmap_masks_below_threshold_and_labels_fit(tmp_path):
    csv, fits = cone_files(tmp_path)
    fig = build_heatmap(FigureJob((csv, fits), "heatmap"))
    ax = fig.axes[0]
    shown = ax.collections[0].get_array()
    grid_vals = np.loadtxt(csv, delimiter=",", skiprows=3)[:, 2].reshape(41, 5)
    assert shown.mask.sum() == (grid_vals < 0.01).sum()
    labels = [text.get_text() for text in ax.get_legend().get_texts()]
    assert labels == ["Linear"]
    # overlay: arrival points plus the dashed fitted curve
    assert len(ax.lines) == 2


def test_heatmap_warns_and_skips_overlay_without_fits(tmp_path):
    csv, _ = cone_files(tmp_path)
    with pytest.warns(UserWarning, match="without overlay"):
        fig = build_heatmap(FigureJob((csv,), "heatmap"))
    ax = fig.axes[0]
    assert len(ax.lines) == 0
    assert ax.get_legend() is None


def test_heatmap_warns_when_alpha_not_in_report(tmp_path):
    csv, _ = cone_files(tmp_path, alpha=0.5)
    fits = write_fits_json(
        tmp_path / "other.json", [{"alpha": 2.0, "model": "Linear", "params": {}}]
    )
    with pytest.warns(UserWarning, match="no entry for alpha=0.5"):
        fig = build_heatmap(FigureJob((csv, fits), "heatmap"))
    assert len(fig.axes[0].lines) == 0


def test_heatmap_zero_grid_fully_masked_no_overlay(tmp_path):
    times = np.linspace(0.0, 1.0, 11)
    csv = write_grid_csv(tmp_path / "z.csv", times, np.arange(4), np.zeros((11, 4)))
    fits = write_fits_json(tmp_path / "f.json", [{"alpha": 2.0, "model": None}])
    fig = build_heatmap(FigureJob((csv, fits), "heatmap"))
    ax = fig.axes[0]
    assert ax.collections[0].get_array().mask.all()
    assert len(ax.lines) == 0
    assert ax.get_legend() is None


def test_heatmap_contour_toggle(tmp_path):
    csv, fits = cone_files(tmp_path)
    with_contour = build_heatmap(FigureJob((csv, fits), "heatmap"))
    without = build_heatmap(
        FigureJob((csv, fits), "heatmap", threshold_contour=False)
    )
    # the contour set registers as an extra collection beside the mesh
    assert len(with_contour.axes[0].collections) > len(without.axes[0].collections)


def test_heatmap_rejects_unknown_model(tmp_path):
    csv, _ = cone_files(tmp_path)
    fits = write_fits_json(
        tmp_path / "f.json", [{"alpha": 2.0, "model": "Quadratic", "params": {}}]
    )
    with pytest.raises(SchemaError, match="unknown front model"):
        build_heatmap(FigureJob((csv, fits), "heatmap"))


def test_renderer_is_deterministic(tmp_path):
    csv, fits = cone_files(tmp_path)
    job = FigureJob((csv, fits), "heatmap")
    a = plot_heatmap(job, tmp_path / "a.png")
    b = plot_heatmap(job, tmp_path / "b.png")
    assert a.read_bytes() == b.read_bytes()
    svg_a = plot_heatmap(job, tmp_path / "a.svg")
    svg_b = plot_heatmap(job, tmp_path / "b.svg")
    assert svg_a.read_bytes() == svg_b.read_bytes()


def test_input_split_rules(tmp_path):
    csv, fits = cone_files(tmp_path)
    other = write_grid_csv(
        tmp_path / "g2.csv", np.linspace(0, 1, 5), [0, 1], np.zeros((5, 2))
    )
    with pytest.raises(SchemaError, match="exactly one"):
        build_heatmap(FigureJob((csv, other), "heatmap"))
    with pytest.raises(SchemaError, match="exactly one"):
        build_heatmap(FigureJob((fits,), "heatmap"))
