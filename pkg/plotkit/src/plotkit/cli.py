"""Command line entry point: ``plot <kind> --in <files> --out <image>``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from plotkit.figures import FigureJob, plot_heatmap, plot_timeseries
from plotkit.io import SchemaError


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render ota-sim output files into figures."
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    specs = {
        "timeseries": "quench CSV plus optional summary JSON (for the tau axis)",
        "heatmap": "light-cone grid CSV plus optional front-fit JSON",
    }
    for kind, help_text in specs.items():
        p = sub.add_parser(kind, help=help_text)
        p.add_argument(
            "--in", dest="inputs", nargs="+", required=True, help=help_text
        )
        p.add_argument("--out", required=True, help="image path (.png or .svg)")
        p.add_argument(
            "--scale",
            type=float,
            default=1.0,
            help="multiply the plotted observable (default 1)",
        )
        p.add_argument(
            "--no-threshold-contour",
            action="store_true",
            help="suppress the threshold contour on heatmaps",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        job = FigureJob(
            inputs=tuple(Path(p) for p in args.inputs),
            kind=args.kind,
            scale=args.scale,
            threshold_contour=not args.no_threshold_contour,
        )
        render = plot_timeseries if args.kind == "timeseries" else plot_heatmap
        out = render(job, Path(args.out))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"render failure: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
