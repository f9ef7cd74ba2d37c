"""Regenerate both figure styles from real producer output.

The producer is invoked as a subprocess and everything crosses the file
boundary: these tests double as the end-to-end check that the renderer
understands the schema the simulator actually writes.
"""

import json
import subprocess
import sys

import pytest

from plotkit.cli import main
from plotkit.figures import FigureJob, build_heatmap
from plotkit.io import fit_for_alpha, read_front_fits


def run_producer(args):
    proc = subprocess.run(
        [sys.executable, "-m", "otasim.cli", *args],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="module")
def quench_out(tmp_path_factory):
    out = tmp_path_factory.mktemp("quench")
    run_producer(["quench", "--preset", "fig4a", "--out", str(out)])
    return out


@pytest.fixture(scope="module")
def lightcone_out(tmp_path_factory):
    out = tmp_path_factory.mktemp("lightcone")
    run_producer(["lightcone", "--preset", "fig5", "--out", str(out)])
    return out


def test_quench_timeseries_renders(quench_out, tmp_path):
    out = tmp_path / "entropy.png"
    rc = main(
        [
            "timeseries",
            "--in",
            str(quench_out / "quench.csv"),
            str(quench_out / "quench_summary.json"),
            "--out",
            str(out),
            "--scale",
            "100",
        ]
    )
    assert rc == 0
    assert out.stat().st_size > 0


def test_heatmaps_render_with_matching_overlay_labels(lightcone_out, tmp_path):
    fits_path = lightcone_out / "front_fits.json"
    fits = read_front_fits(fits_path)
    for alpha, label in ((2.0, "Linear"), (0.5, "Logarithmic")):
        grid_csv = lightcone_out / f"lightcone_alpha{alpha:g}.csv"
        out = tmp_path / f"cone_{alpha:g}.png"
        rc = main(
            ["heatmap", "--in", str(grid_csv), str(fits_path), "--out", str(out)]
        )
        assert rc == 0
        assert out.stat().st_size > 0
        # the overlay label must equal the producer's stored classification
        assert fit_for_alpha(fits, alpha)["model"] == label
        fig = build_heatmap(FigureJob((grid_csv, fits_path), "heatmap"))
        legend = fig.axes[0].get_legend()
        assert [t.get_text() for t in legend.get_texts()] == [label]


def test_every_swept_alpha_renders(lightcone_out, tmp_path):
    report = json.loads((lightcone_out / "front_fits.json").read_text())
    for fit in report["fits"]:
        alpha = fit["alpha"]
        rc = main(
            [
                "heatmap",
                "--in",
                str(lightcone_out / f"lightcone_alpha{alpha:g}.csv"),
                str(lightcone_out / "front_fits.json"),
                "--out",
                str(tmp_path / f"a{alpha:g}.png"),
            ]
        )
        assert rc == 0
