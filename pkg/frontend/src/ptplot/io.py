"""Readers for the lattice CLI's documented file formats.

The plot kit consumes only the public output schemas: phase-sweep CSV
(fixed ``m,mu,gamma_pt,status,evaluations`` header preceded by ``#`` comment
lines) and spectrum JSON (``ptlattice.spectrum.v1``). Nothing here imports
the lattice package; the files are the whole interface.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import MissingFileError, SchemaMismatchError

PHASE_HEADER = "m,mu,gamma_pt,status,evaluations"
SPECTRUM_SCHEMA = "ptlattice.spectrum.v1"
_CONFIG_PREFIX = "# config:"
_SERIES_PREFIX = "# series: t_d_over_t_s="


@dataclass(frozen=True)
class PhaseRow:
    """One sweep row: impurity site, relative depth, threshold, search status."""

    m: int
    mu: float
    gamma_pt: float
    status: str
    evaluations: int

    @property
    def converged(self) -> bool:
        return self.status == "converged"


@dataclass(frozen=True)
class PhaseSeries:
    """One parsed sweep CSV."""

    path: str
    n_sites: int
    t_s: float
    series_ratio: float | None
    rows: tuple[PhaseRow, ...]

    @property
    def default_label(self) -> str:
        if self.series_ratio is not None:
            return f"t_d/t_s = {self.series_ratio:g}"
        return Path(self.path).stem


@dataclass(frozen=True)
class SpectrumPoint:
    """One spectrum JSON: the gain value and its eigenvalue multiset."""

    gamma: float
    eigenvalues: tuple[complex, ...]


@dataclass(frozen=True)
class FlowData:
    """Spectra at strictly increasing gain values."""

    points: tuple[SpectrumPoint, ...]

    @property
    def gammas(self) -> tuple[float, ...]:
        return tuple(point.gamma for point in self.points)


def _read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MissingFileError(f"cannot read {path}: {exc}") from exc


def read_phase_csv(path: str | Path) -> PhaseSeries:
    """Parse one sweep CSV, validating the exact documented shape."""
    text = _read_text(path)
    config: dict | None = None
    series_ratio: float | None = None
    lines = text.splitlines()
    index = 0
    for index, line in enumerate(lines):
        if not line.startswith("#"):
            break
        if line.startswith(_CONFIG_PREFIX):
            try:
                config = json.loads(line[len(_CONFIG_PREFIX):])
            except json.JSONDecodeError as exc:
                raise SchemaMismatchError(
                    f"{path}: malformed embedded config: {exc}"
                ) from exc
        elif line.startswith(_SERIES_PREFIX):
            try:
                series_ratio = float(line[len(_SERIES_PREFIX):])
            except ValueError as exc:
                raise SchemaMismatchError(
                    f"{path}: malformed series comment: {line!r}"
                ) from exc
    else:
        raise SchemaMismatchError(f"{path}: no header row found")

    if lines[index] != PHASE_HEADER:
        raise SchemaMismatchError(
            f"{path}: expected header {PHASE_HEADER!r}, got {lines[index]!r}"
        )
    if not isinstance(config, dict):
        raise SchemaMismatchError(f"{path}: missing '# config:' comment line")
    n_sites = config.get("N")
    if not isinstance(n_sites, int) or n_sites < 2:
        raise SchemaMismatchError(f"{path}: embedded config lacks a valid N")
    t_s = config.get("t_s", config.get("t0", 1.0))
    if not isinstance(t_s, (int, float)) or not t_s > 0:
        raise SchemaMismatchError(f"{path}: embedded config has invalid t_s")

    rows = []
    for number, line in enumerate(lines[index + 1:], start=index + 2):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 5:
            raise SchemaMismatchError(
                f"{path}:{number}: expected 5 fields, got {len(fields)}"
            )
        try:
            rows.append(
                PhaseRow(
                    m=int(fields[0]),
                    mu=float(fields[1]),
                    gamma_pt=float(fields[2]),
                    status=fields[3],
                    evaluations=int(fields[4]),
                )
            )
        except ValueError as exc:
            raise SchemaMismatchError(f"{path}:{number}: {exc}") from exc
    if not rows:
        raise SchemaMismatchError(f"{path}: no data rows")
    return PhaseSeries(
        path=str(path),
        n_sites=n_sites,
        t_s=float(t_s),
        series_ratio=series_ratio,
        rows=tuple(rows),
    )


def read_spectrum_json(path: str | Path) -> SpectrumPoint:
    """Parse one spectrum JSON, extracting the gain value and eigenvalues."""
    text = _read_text(path)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaMismatchError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(document, dict) or document.get("schema") != SPECTRUM_SCHEMA:
        raise SchemaMismatchError(
            f"{path}: expected schema {SPECTRUM_SCHEMA!r}, "
            f"got {document.get('schema') if isinstance(document, dict) else document!r}"
        )
    config = document.get("config")
    if not isinstance(config, dict) or not isinstance(
        config.get("gamma"), (int, float)
    ):
        raise SchemaMismatchError(f"{path}: embedded config lacks a numeric gamma")
    eigenvalues = document.get("eigenvalues")
    if not isinstance(eigenvalues, list) or not eigenvalues:
        raise SchemaMismatchError(f"{path}: eigenvalues must be a non-empty list")
    parsed = []
    for entry in eigenvalues:
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(part, (int, float)) for part in entry)
            or not all(math.isfinite(part) for part in entry)
        ):
            raise SchemaMismatchError(
                f"{path}: eigenvalue entries must be finite [re, im] pairs"
            )
        parsed.append(complex(entry[0], entry[1]))
    return SpectrumPoint(gamma=float(config["gamma"]), eigenvalues=tuple(parsed))


def read_flow_inputs(source: str | Path | Sequence[str | Path]) -> FlowData:
    """Load spectra from a directory (``*.json``, name order) or explicit paths.

    The gain values must come out strictly increasing; name your files in
    sweep order (``flow_000.json``, ``flow_001.json``, ...) when using a
    directory.
    """
    if isinstance(source, (str, Path)) and Path(source).is_dir():
        paths: list[Path] = sorted(Path(source).glob("*.json"))
        if not paths:
            raise MissingFileError(f"no .json files in directory {source}")
    elif isinstance(source, (str, Path)):
        paths = [Path(source)]
    else:
        paths = [Path(item) for item in source]
        if not paths:
            raise MissingFileError("no spectrum files given")
    points = tuple(read_spectrum_json(path) for path in paths)
    dimensions = {len(point.eigenvalues) for point in points}
    if len(dimensions) != 1:
        raise SchemaMismatchError(
            f"spectrum files disagree on dimension: {sorted(dimensions)}"
        )
    for previous, current in zip(points, points[1:]):
        if not current.gamma > previous.gamma:
            raise SchemaMismatchError(
                "gain values must be strictly increasing across inputs, got "
                f"{previous.gamma} then {current.gamma}"
            )
    return FlowData(points=points)
