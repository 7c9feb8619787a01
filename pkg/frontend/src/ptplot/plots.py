"""Figure rendering: phase diagrams from sweep CSVs, spectral flow from JSONs.

Both renderers are read-only over their inputs and return the plotted
dataset (an exact, comparable record of every point placed on the axes) so
callers and tests can assert determinism independent of image bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import PlotSpecError, SchemaMismatchError
from .io import FlowData, read_flow_inputs, read_phase_csv

MARKERS = ("o", "s", "^", "D", "v", "P", "X", "*")
IMAGE_FORMATS = (".svg", ".png")


def _validate_image_path(out_path: str | Path) -> Path:
    path = Path(out_path)
    if path.suffix.lower() not in IMAGE_FORMATS:
        raise PlotSpecError(
            f"output must end in one of {IMAGE_FORMATS}, got {path.name!r}"
        )
    return path


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: one CSV per series, optional labels, output image path.

    Labels default to each file's series comment (``t_d/t_s = r``) or file
    stem; explicit labels must match the path count and be unique. The
    output format is taken from the file extension (.svg or .png).
    """

    csv_paths: tuple[str, ...]
    out_path: str
    labels: tuple[str, ...] | None = None
    x_label: str = r"$\mu = m / N$"
    y_label: str = r"$\gamma_{PT} / t_s$"
    title: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "csv_paths", tuple(self.csv_paths))
        if not self.csv_paths:
            raise PlotSpecError("at least one CSV path is required")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.csv_paths):
                raise PlotSpecError(
                    f"{len(self.labels)} labels for {len(self.csv_paths)} files"
                )
            if len(set(self.labels)) != len(self.labels):
                raise PlotSpecError(f"series labels must be unique: {self.labels}")
        _validate_image_path(self.out_path)


@dataclass(frozen=True)
class PlottedPoint:
    mu: float
    value: float
    filled: bool


@dataclass(frozen=True)
class PlottedSeries:
    label: str
    marker: str
    points: tuple[PlottedPoint, ...]
    omitted_rows: int = 0


@dataclass(frozen=True)
class PhaseDataset:
    n_sites: int
    series: tuple[PlottedSeries, ...] = field(default_factory=tuple)


def render_phase_diagram(spec: PlotSpec) -> PhaseDataset:
    """Draw threshold-versus-depth curves, one marker style per series.

    Rows whose search did not converge are drawn as open markers; rows with
    a non-finite threshold (no upper bracket) have no plottable value and
    are only counted in ``omitted_rows``.
    """
    series_files = [read_phase_csv(path) for path in spec.csv_paths]
    sizes = {item.n_sites for item in series_files}
    if len(sizes) != 1:
        raise SchemaMismatchError(
            f"input files disagree on lattice size N: {sorted(sizes)}"
        )
    n_sites = sizes.pop()
    labels = spec.labels or tuple(item.default_label for item in series_files)
    if len(set(labels)) != len(labels):
        raise PlotSpecError(
            f"derived labels are not unique ({labels}); pass explicit labels"
        )

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    plotted = []
    for index, (item, label) in enumerate(zip(series_files, labels)):
        marker = MARKERS[index % len(MARKERS)]
        points = tuple(
            PlottedPoint(row.mu, row.gamma_pt / item.t_s, row.converged)
            for row in item.rows
            if math.isfinite(row.gamma_pt)
        )
        omitted = len(item.rows) - len(points)
        filled = [p for p in points if p.filled]
        hollow = [p for p in points if not p.filled]
        (line,) = ax.plot(
            [p.mu for p in filled],
            [p.value for p in filled],
            marker=marker,
            linestyle="-",
            markersize=4,
            label=label,
        )
        if hollow:
            ax.scatter(
                [p.mu for p in hollow],
                [p.value for p in hollow],
                marker=marker,
                facecolors="none",
                edgecolors=line.get_color(),
                s=30,
            )
        plotted.append(PlottedSeries(label, marker, points, omitted))

    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label)
    ax.set_title(spec.title if spec.title is not None else f"N = {n_sites}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.savefig(spec.out_path, bbox_inches="tight")
    plt.close(fig)
    return PhaseDataset(n_sites=n_sites, series=tuple(plotted))


@dataclass(frozen=True)
class FlowPoint:
    gamma: float
    values: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class FlowDataset:
    points: tuple[FlowPoint, ...] = field(default_factory=tuple)

    def first_complex_gamma(self, tolerance: float = 1e-9) -> float | None:
        """Smallest gain value whose spectrum has |Im| above ``tolerance``."""
        for point in self.points:
            if any(abs(im) > tolerance for _, im in point.values):
                return point.gamma
        return None


def render_spectral_flow(
    source: FlowData | str | Path | Sequence[str | Path],
    out_path: str | Path,
    title: str | None = None,
) -> FlowDataset:
    """Draw real and imaginary eigenvalue parts against the gain value.

    ``source`` is a ``FlowData``, a directory of spectrum JSONs (read in
    name order), or an explicit path sequence; gain values must be strictly
    increasing.
    """
    flow = source if isinstance(source, FlowData) else read_flow_inputs(source)
    _validate_image_path(out_path)
    dataset = FlowDataset(
        points=tuple(
            FlowPoint(
                point.gamma,
                tuple(
                    sorted((value.real, value.imag) for value in point.eigenvalues)
                ),
            )
            for point in flow.points
        )
    )

    gammas = []
    reals = []
    imags = []
    for point in dataset.points:
        for re, im in point.values:
            gammas.append(point.gamma)
            reals.append(re)
            imags.append(im)

    fig, (ax_re, ax_im) = plt.subplots(
        2, 1, sharex=True, figsize=(6.0, 5.0), constrained_layout=True
    )
    ax_re.scatter(gammas, reals, s=6)
    ax_im.scatter(gammas, imags, s=6)
    ax_re.set_ylabel(r"Re $\varepsilon$")
    ax_im.set_ylabel(r"Im $\varepsilon$")
    ax_im.set_xlabel(r"$\gamma$")
    ax_re.grid(True, alpha=0.3)
    ax_im.grid(True, alpha=0.3)
    if title is not None:
        ax_re.set_title(title)
    fig.savefig(out_path, bbox_inches="tight")
    plt.close(fig)
    return dataset
