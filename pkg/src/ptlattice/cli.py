"""Command-line interface.

Usage::

    ptlattice <command> --config job.yaml [--set key=value ...] [--out DIR]

The command names a job type; the config document describes the lattice and
search parameters.  A handful of scalar keys (N, m, t_d, gamma) can be
overridden per run with ``--set``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import COMMANDS, OVERRIDABLE_KEYS, apply_overrides, build_config, load_document
from .errors import ConfigError, NotDecomposableError, PtLatticeError, SpecValidationError
from .runner import EXIT_NUMERICAL, EXIT_VALIDATION, run_command


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptlattice",
        description=(
            "Spectra, symmetry-breaking thresholds, and phase diagrams for "
            "balanced-gain-loss tight-binding lattices with a two-state "
            "internal mode."
        ),
    )
    parser.add_argument("command", choices=COMMANDS, help="job type to run")
    parser.add_argument(
        "--config", required=True, help="path to a YAML/JSON job document"
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help=f"override a config key (allowed: {', '.join(OVERRIDABLE_KEYS)})",
    )
    parser.add_argument(
        "--out", default=None, help="output directory (default: config out_dir)"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        raw = load_document(text)
        raw = apply_overrides(raw, args.overrides)
        raw.setdefault("command", args.command)
        if raw["command"] != args.command:
            print(
                f"error: command line says {args.command!r} but config says "
                f"{raw['command']!r}",
                file=sys.stderr,
            )
            return EXIT_VALIDATION
        job = build_config(raw)
        return run_command(job, out_dir=args.out)
    except (ConfigError, SpecValidationError, NotDecomposableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PtLatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
