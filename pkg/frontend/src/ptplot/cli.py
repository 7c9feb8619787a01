"""Command-line entry point: ``ptplot phase ...`` and ``ptplot flow ...``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .errors import PtPlotError
from .plots import PlotSpec, render_phase_diagram, render_spectral_flow

EXIT_OK = 0
EXIT_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptplot",
        description=(
            "Render phase diagrams and spectral-flow figures from the "
            "lattice CLI's CSV/JSON outputs."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    phase = commands.add_parser(
        "phase", help="threshold vs. impurity depth, one marker per series"
    )
    phase.add_argument(
        "--csv", nargs="+", required=True, metavar="FILE", help="one sweep CSV per series"
    )
    phase.add_argument(
        "--labels", nargs="+", metavar="LABEL", help="series labels (default: from files)"
    )
    phase.add_argument("--out", required=True, metavar="IMAGE", help=".svg or .png path")
    phase.add_argument("--title", help="figure title (default: lattice size)")

    flow = commands.add_parser(
        "flow", help="eigenvalue real/imaginary parts vs. gain value"
    )
    flow.add_argument(
        "--json",
        nargs="+",
        required=True,
        metavar="PATH",
        help="a directory of spectrum JSONs (name order) or explicit files",
    )
    flow.add_argument("--out", required=True, metavar="IMAGE", help=".svg or .png path")
    flow.add_argument("--title", help="figure title")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "phase":
            spec = PlotSpec(
                csv_paths=tuple(args.csv),
                out_path=args.out,
                labels=tuple(args.labels) if args.labels else None,
                title=args.title,
            )
            dataset = render_phase_diagram(spec)
            total = sum(len(series.points) for series in dataset.series)
            print(
                f"wrote {args.out}: {len(dataset.series)} series, "
                f"{total} points, N = {dataset.n_sites}"
            )
        else:
            source = args.json[0] if len(args.json) == 1 else args.json
            dataset = render_spectral_flow(source, args.out, title=args.title)
            print(f"wrote {args.out}: {len(dataset.points)} gain values")
    except PtPlotError as exc:
        print(f"ptplot: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"ptplot: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK
