"""Readers and schema validation for ota-sim output files.

Every file the renderer touches must carry the schema v1 marker: CSV files
as a ``# ota-sim schema v1`` first line, JSON documents as a ``schema``
key. Anything else is rejected with a :class:`SchemaError` naming the file.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

SCHEMA = "ota-sim schema v1"
CSV_HEADER = f"# {SCHEMA}"
QUENCH_COLUMNS = "t,sim_value,pred_finite,pred_infinite,observable"
GRID_COLUMNS = "t,M,I2"

_LABEL = re.compile(r"^\w+\[N=(\d+)\]$")
_GRID_KIND = re.compile(
    r"^# kind: lightcone_grid alpha=(?P<alpha>\S+) epsilon=(?P<epsilon>\S+) "
    r"threshold=(?P<threshold>\S+)$"
)


class SchemaError(ValueError):
    """An input file is missing, malformed, or not schema v1."""


def _read_lines(path: Path) -> list[str]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != CSV_HEADER:
        raise SchemaError(f"{path} does not start with {CSV_HEADER!r}")
    return lines


def read_json(path: Path) -> dict:
    """Load a JSON document and check its schema marker."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SchemaError(f"{path} lacks the {SCHEMA!r} marker")
    return doc


@dataclass(frozen=True)
class Curve:
    """One observable's time series along with both prediction routes."""

    label: str
    N: int | None
    t: NDArray[np.float64]
    sim: NDArray[np.float64]
    pred_finite: NDArray[np.float64]
    pred_infinite: NDArray[np.float64]


def read_timeseries(path: Path) -> list[Curve]:
    """Parse a quench CSV into one curve per observable label."""
    lines = _read_lines(path)
    if len(lines) < 2 or lines[1] != QUENCH_COLUMNS:
        raise SchemaError(f"{path} is not a quench time-series file")
    order: list[str] = []
    rows: dict[str, list[list[float]]] = {}
    for no, line in enumerate(lines[2:], start=3):
        parts = line.split(",")
        if len(parts) != 5:
            raise SchemaError(f"{path}:{no}: expected 5 columns, got {len(parts)}")
        label = parts[4]
        try:
            values = [float(x) for x in parts[:4]]
        except ValueError as exc:
            raise SchemaError(f"{path}:{no}: {exc}") from exc
        if label not in rows:
            order.append(label)
            rows[label] = []
        rows[label].append(values)
    if not rows:
        raise SchemaError(f"{path} has no data rows")
    curves = []
    for label in order:
        cols = np.array(rows[label]).T
        match = _LABEL.match(label)
        curves.append(
            Curve(label, int(match.group(1)) if match else None, *cols)
        )
    return curves


def read_summary(path: Path) -> dict[int, dict]:
    """Quench summary JSON, keyed by mode count N."""
    doc = read_json(path)
    if "runs" not in doc:
        raise SchemaError(f"{path} is not a quench summary (no 'runs')")
    return {int(run["N"]): run for run in doc["runs"]}


@dataclass(frozen=True)
class Grid:
    """Mutual-information values on a (time, separation) grid."""

    times: NDArray[np.float64]
    separations: NDArray[np.int_]
    values: NDArray[np.float64]
    alpha: float
    epsilon: float
    threshold: float

    @property
    def distances(self) -> NDArray[np.float64]:
        return (self.separations + 1.0) * self.epsilon


def read_grid(path: Path) -> Grid:
    """Parse a light-cone CSV (header carries alpha, epsilon, threshold)."""
    lines = _read_lines(path)
    if len(lines) < 3:
        raise SchemaError(f"{path} is truncated")
    kind = _GRID_KIND.match(lines[1])
    if kind is None:
        raise SchemaError(f"{path} is not a light-cone grid file")
    if lines[2] != GRID_COLUMNS:
        raise SchemaError(f"{path} has column header {lines[2]!r}")
    try:
        data = np.array([[float(x) for x in line.split(",")] for line in lines[3:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    if data.size == 0:
        raise SchemaError(f"{path} has no data rows")
    seps = np.unique(data[:, 1].astype(int))
    n_seps = len(seps)
    if len(data) % n_seps != 0:
        raise SchemaError(f"{path}: ragged grid ({len(data)} rows, {n_seps} separations)")
    times = data[::n_seps, 0]
    if np.any(np.diff(times) <= 0):
        raise SchemaError(f"{path}: grid times are not strictly increasing")
    return Grid(
        times=times,
        separations=seps,
        values=data[:, 2].reshape(len(times), n_seps),
        alpha=float(kind.group("alpha")),
        epsilon=float(kind.group("epsilon")),
        threshold=float(kind.group("threshold")),
    )


def read_front_fits(path: Path) -> list[dict]:
    """Front-fit report JSON: one entry per swept coupling range alpha."""
    doc = read_json(path)
    if "fits" not in doc:
        raise SchemaError(f"{path} is not a front-fit report (no 'fits')")
    return doc["fits"]


def fit_for_alpha(fits: list[dict], alpha: float) -> dict | None:
    """The fit entry matching a grid's alpha, or None if absent."""
    for fit in fits:
        if math.isclose(float(fit["alpha"]), alpha, rel_tol=1e-9, abs_tol=1e-12):
            return fit
    return None
