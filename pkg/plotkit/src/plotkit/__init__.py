"""Render ota-sim output files into publication-style figures.

The package is a pure renderer: it reads schema v1 CSV/JSON files produced
by the ota-sim CLI and never recomputes any physics. Byte-identical inputs
give identical images for a fixed renderer version.
"""

from plotkit.figures import FigureJob, plot_heatmap, plot_timeseries
from plotkit.io import SchemaError

__all__ = ["FigureJob", "SchemaError", "plot_heatmap", "plot_timeseries"]
