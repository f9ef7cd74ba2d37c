"""Schema validation and file parsing."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from schemafiles import write_fits_json, write_grid_csv, write_quench_csv, write_summary_json
from plotkit.io import (
    SchemaError,
    fit_for_alpha,
    read_front_fits,
    read_grid,
    read_summary,
    read_timeseries,
)


def test_timeseries_round_trip(tmp_path):
    t = np.linspace(0.0, 2.0, 9)
    curves = {
        "S2[N=4]": (t, t**2, t**2 + 0.1, t**2 + 0.2),
        "S2[N=8]": (t, 2 * t, 2 * t + 0.1, 2 * t + 0.2),
    }
    path = write_quench_csv(tmp_path / "q.csv", curves)
    parsed = read_timeseries(path)
    assert [c.label for c in parsed] == ["S2[N=4]", "S2[N=8]"]
    assert [c.N for c in parsed] == [4, 8]
    assert_allclose(parsed[0].sim, t**2)
    assert_allclose(parsed[1].pred_finite, 2 * t + 0.1)


def test_timeseries_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,sim\n0,1\n")
    with pytest.raises(SchemaError, match="schema v1"):
        read_timeseries(path)


def test_timeseries_rejects_empty_and_ragged(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# ota-sim schema v1\nt,sim_value,pred_finite,pred_infinite,observable\n")
    with pytest.raises(SchemaError, match="no data rows"):
        read_timeseries(path)
    path.write_text(
        "# ota-sim schema v1\nt,sim_value,pred_finite,pred_infinite,observable\n0,1,2\n"
    )
    with pytest.raises(SchemaError, match="5 columns"):
        read_timeseries(path)


def test_timeseries_missing_file(tmp_path):
    with pytest.raises(SchemaError, match="cannot read"):
        read_timeseries(tmp_path / "nope.csv")


def test_summary_requires_runs_key(tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"schema": "ota-sim schema v1", "fits": []}')
    with pytest.raises(SchemaError, match="runs"):
        read_summary(path)
    write_summary_json(path, [{"N": 5, "tau": 2.4}, {"N": 10, "tau": 4.8}])
    assert read_summary(path)[10]["tau"] == 4.8


def test_json_marker_enforced(tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"runs": []}')
    with pytest.raises(SchemaError, match="marker"):
        read_summary(path)
    path.write_text("{not json")
    with pytest.raises(SchemaError, match="valid JSON"):
        read_summary(path)


def test_grid_round_trip(tmp_path):
    times = np.linspace(0.0, 1.0, 6)
    seps = [0, 1, 2]
    values = np.arange(18, dtype=float).reshape(6, 3) / 100.0
    path = write_grid_csv(tmp_path / "g.csv", times, seps, values, alpha=1.5, epsilon=0.2)
    grid = read_grid(path)
    assert grid.alpha == 1.5
    assert grid.epsilon == 0.2
    assert grid.threshold == 0.01
    assert_allclose(grid.times, times)
    assert_allclose(grid.values, values)
    assert_allclose(grid.distances, [0.2, 0.4, 0.6])


def test_grid_rejects_ragged_and_empty(tmp_path):
    path = tmp_path / "g.csv"
    head = (
        "# ota-sim schema v1\n"
        "# kind: lightcone_grid alpha=2 epsilon=0.1 threshold=0.01\n"
        "t,M,I2\n"
    )
    path.write_text(head)
    with pytest.raises(SchemaError, match="no data rows"):
        read_grid(path)
    path.write_text(head + "0,0,0.1\n0,1,0.1\n0.5,0,0.2\n")
    with pytest.raises(SchemaError, match="ragged"):
        read_grid(path)


def test_grid_rejects_other_csv_kinds(tmp_path):
    path = write_quench_csv(
        tmp_path / "q.csv", {"S2[N=4]": tuple(np.zeros((4, 3)))}
    )
    with pytest.raises(SchemaError, match="light-cone"):
        read_grid(path)


def test_fit_lookup_by_alpha(tmp_path):
    fits = [
        {"alpha": 2.0, "model": "Linear", "params": {"a": 0.8, "b": 0.0}},
        {"alpha": 0.05, "model": "Constant", "params": {"b": 0.1}},
    ]
    path = write_fits_json(tmp_path / "f.json", fits)
    loaded = read_front_fits(path)
    assert fit_for_alpha(loaded, 2.0)["model"] == "Linear"
    assert fit_for_alpha(loaded, 0.05)["model"] == "Constant"
    assert fit_for_alpha(loaded, 1.0) is None
