"""Correlation-front extraction and functional-form classification.

Long-range couplings bend the light cone: the locus where mutual
information between two single sites first exceeds a threshold follows
t = a*d + b (linear), a*d^gamma + b (algebraic), a*ln(d) + b
(logarithmic), or a constant, depending on the coupling exponent. This
module pulls arrival times out of an I2(t, distance) grid and picks the
form with the best small-sample information score.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar

MODELS = ("Constant", "Linear", "Algebraic", "Logarithmic")

_N_PARAMS = {"Constant": 1, "Linear": 2, "Algebraic": 3, "Logarithmic": 2}


class NoFrontError(ValueError):
    """The grid never crosses the threshold at any separation."""


@dataclass(frozen=True)
class CorrelationGrid:
    """Mutual information I2 between single sites, on a (time, M) grid.

    ``separations`` holds the mode gaps M; the physical center distance is
    d = (M + 1) * epsilon.
    """

    times: NDArray[np.float64]
    separations: NDArray[np.int_]
    values: NDArray[np.float64]
    epsilon: float
    threshold: float = 0.01

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.times), len(self.separations)):
            raise ValueError("values must be (n_times, n_separations)")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if np.any(self.values < 0):
            raise ValueError("mutual information values must be nonnegative")
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")

    @property
    def distances(self) -> NDArray[np.float64]:
        return (np.asarray(self.separations) + 1.0) * self.epsilon


@dataclass(frozen=True)
class FrontFit:
    """A fitted arrival-time curve t(d) and its selection score."""

    model: str
    params: dict[str, float]
    residual: float
    aicc: float
    distances: NDArray[np.float64] = field(repr=False)
    arrival_times: NDArray[np.float64] = field(repr=False)

    def evaluate(self, d: NDArray[np.float64]) -> NDArray[np.float64]:
        """Predicted arrival time at distance d."""
        d = np.asarray(d, dtype=float)
        p = self.params
        if self.model == "Constant":
            return np.full_like(d, p["b"])
        if self.model == "Linear":
            return p["a"] * d + p["b"]
        if self.model == "Logarithmic":
            return p["a"] * np.log(d) + p["b"]
        return p["a"] * d ** p["gamma"] + p["b"]


def correlation_front(grid: CorrelationGrid) -> NDArray[np.float64]:
    """First-crossing times per separation, NaN where the front never arrives.

    The earliest sample at or above the threshold is interpolated linearly
    against its predecessor; a column already above threshold at the first
    sample gets that time.
    """
    t = grid.times
    arrivals = np.full(len(grid.separations), np.nan)
    for col in range(grid.values.shape[1]):
        v = grid.values[:, col]
        hits = np.nonzero(v >= grid.threshold)[0]
        if hits.size == 0:
            continue
        i = int(hits[0])
        if i == 0:
            arrivals[col] = t[0]
        else:
            frac = (grid.threshold - v[i - 1]) / (v[i] - v[i - 1])
            arrivals[col] = t[i - 1] + frac * (t[i] - t[i - 1])
    if np.all(np.isnan(arrivals)):
        raise NoFrontError(f"no column ever reaches threshold {grid.threshold}")
    return arrivals


def _lstsq_fit(design: NDArray[np.float64], t: NDArray[np.float64]):
    coef, *_ = np.linalg.lstsq(design, t, rcond=None)
    resid = t - design @ coef
    return coef, float(resid @ resid)


def fit_front(
    distances: NDArray[np.float64], arrivals: NDArray[np.float64], model: str
) -> FrontFit:
    """Least-squares fit of one functional form to finite arrival points.

    The algebraic exponent is found by a bounded scan over gamma in (0, 1)
    with the linear coefficients solved exactly at each candidate.
    """
    if model not in MODELS:
        raise ValueError(f"unknown front model {model!r}")
    d = np.asarray(distances, dtype=float)
    t = np.asarray(arrivals, dtype=float)
    keep = np.isfinite(t)
    d, t = d[keep], t[keep]
    n = len(t)
    k = _N_PARAMS[model]
    if n < max(3, k + 1):
        raise ValueError(f"{model} fit needs at least {max(3, k + 1)} points, got {n}")
    ones = np.ones_like(d)
    if model == "Constant":
        params = {"b": float(t.mean())}
        rss = float(np.sum((t - t.mean()) ** 2))
    elif model == "Linear":
        coef, rss = _lstsq_fit(np.column_stack([d, ones]), t)
        params = {"a": float(coef[0]), "b": float(coef[1])}
    elif model == "Logarithmic":
        coef, rss = _lstsq_fit(np.column_stack([np.log(d), ones]), t)
        params = {"a": float(coef[0]), "b": float(coef[1])}
    else:
        def rss_at(gamma: float) -> float:
            return _lstsq_fit(np.column_stack([d**gamma, ones]), t)[1]

        coarse = np.linspace(0.01, 0.99, 99)
        g0 = coarse[int(np.argmin([rss_at(g) for g in coarse]))]
        res = minimize_scalar(
            rss_at,
            bounds=(max(g0 - 0.02, 1e-3), min(g0 + 0.02, 1 - 1e-3)),
            method="bounded",
        )
        gamma = float(res.x)
        coef, rss = _lstsq_fit(np.column_stack([d**gamma, ones]), t)
        params = {"a": float(coef[0]), "b": float(coef[1]), "gamma": gamma}
    return FrontFit(model, params, float(np.sqrt(rss / n)), _aicc(rss, n, k), d, t)


def _aicc(rss: float, n: int, k: int) -> float:
    """Small-sample corrected score n ln(RSS/n) + 2k + 2k(k+1)/(n-k-1)."""
    if n - k - 1 <= 0:
        return np.inf
    return n * np.log(max(rss / n, 1e-300)) + 2 * k + 2 * k * (k + 1) / (n - k - 1)


def classify_front(
    distances: NDArray[np.float64],
    arrivals: NDArray[np.float64],
    resolution: float = 0.0,
) -> FrontFit:
    """Fit every model and keep the lowest AICc, ties going to fewer params.

    ``resolution`` is the arrival-time measurement resolution (one step of
    the underlying time grid). Models whose RMS residual falls below it all
    describe the data as well as the grid can certify, so they count as
    tied and the one with fewest parameters wins; this is what makes an
    essentially flat front register as Constant rather than as a
    vanishing-amplitude trend.
    """
    fits = []
    for model in MODELS:
        try:
            fits.append(fit_front(distances, arrivals, model))
        except ValueError:
            continue
    if not fits:
        raise ValueError("no model could be fitted to the arrival points")
    resolved = [f for f in fits if f.residual < resolution]
    if resolved:
        resolved.sort(key=lambda f: (_N_PARAMS[f.model], f.aicc))
        return resolved[0]
    best = min(f.aicc for f in fits)
    tied = [f for f in fits if f.aicc <= best + 1e-9]
    tied.sort(key=lambda f: _N_PARAMS[f.model])
    return tied[0]


def classify_grid(grid: CorrelationGrid, include_nearest: bool = False) -> FrontFit:
    """Extract the front from a grid and classify it.

    The M = 0 column reflects onset normalization rather than propagation
    and is left out of the fit unless ``include_nearest`` is set. The
    grid's median time step is passed down as the arrival resolution.
    """
    arrivals = correlation_front(grid)
    d = grid.distances
    if not include_nearest:
        keep = np.asarray(grid.separations) != 0
        d, arrivals = d[keep], arrivals[keep]
    return classify_front(d, arrivals, resolution=float(np.median(np.diff(grid.times))))
