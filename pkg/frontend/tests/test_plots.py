"""Renderers: plotted datasets, marker assignment, determinism, invariants."""

from __future__ import annotations

import math

import pytest
from conftest import phase_csv_text, u_curve_rows, write_dimer_flow, write_phase_series

from ptplot import (
    PlotSpec,
    PlotSpecError,
    SchemaMismatchError,
    render_phase_diagram,
    render_spectral_flow,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestPlotSpec:
    def test_requires_paths(self, tmp_path):
        with pytest.raises(PlotSpecError, match="at least one"):
            PlotSpec(csv_paths=(), out_path=str(tmp_path / "fig.svg"))

    def test_label_count_must_match(self, tmp_path):
        with pytest.raises(PlotSpecError, match="2 labels for 1 files"):
            PlotSpec(("a.csv",), str(tmp_path / "fig.svg"), labels=("x", "y"))

    def test_labels_must_be_unique(self, tmp_path):
        with pytest.raises(PlotSpecError, match="unique"):
            PlotSpec(("a.csv", "b.csv"), str(tmp_path / "fig.svg"), labels=("x", "x"))

    def test_output_format_from_extension(self, tmp_path):
        with pytest.raises(PlotSpecError, match="output must end"):
            PlotSpec(("a.csv",), str(tmp_path / "fig.pdf"))

    def test_axis_defaults_follow_convention(self, tmp_path):
        spec = PlotSpec(("a.csv",), str(tmp_path / "fig.svg"))
        assert "mu" in spec.x_label and "gamma_{PT} / t_s" in spec.y_label


class TestPhaseDiagram:
    def test_single_series_single_row(self, tmp_path):
        path = write(
            tmp_path, "one.csv", phase_csv_text(4, [(1, 0.25, 0.8, "converged", 20)])
        )
        out = tmp_path / "fig.svg"
        dataset = render_phase_diagram(PlotSpec((str(path),), str(out)))
        assert out.stat().st_size > 0
        assert len(dataset.series) == 1
        (point,) = dataset.series[0].points
        assert (point.mu, point.value, point.filled) == (0.25, 0.8, True)

    def test_three_series_distinct_markers_and_labels(self, tmp_path):
        paths = write_phase_series(tmp_path, 40, [0.0, 0.4, 0.7])
        out = tmp_path / "fig.svg"
        dataset = render_phase_diagram(PlotSpec(tuple(map(str, paths)), str(out)))
        assert dataset.n_sites == 40
        markers = [series.marker for series in dataset.series]
        assert len(set(markers)) == 3
        assert [series.label for series in dataset.series] == [
            "t_d/t_s = 0",
            "t_d/t_s = 0.4",
            "t_d/t_s = 0.7",
        ]
        assert all(len(series.points) == 20 for series in dataset.series)

    def test_threshold_normalized_by_amplitude(self, tmp_path):
        rows = [(1, 0.25, 1.5, "converged", 20)]
        path = write(tmp_path, "a.csv", phase_csv_text(4, rows, t_s=3.0))
        dataset = render_phase_diagram(
            PlotSpec((str(path),), str(tmp_path / "fig.svg"))
        )
        assert dataset.series[0].points[0].value == 0.5

    def test_non_converged_rows_are_open_markers(self, tmp_path):
        rows = [
            (1, 0.125, 0.0, "always-broken", 1),
            (2, 0.25, 0.7, "converged", 25),
            (3, 0.375, 0.72, "converged-reentrant", 41),
        ]
        path = write(tmp_path, "a.csv", phase_csv_text(8, rows))
        dataset = render_phase_diagram(
            PlotSpec((str(path),), str(tmp_path / "fig.svg"))
        )
        filled = [point.filled for point in dataset.series[0].points]
        assert filled == [False, True, False]

    def test_infinite_rows_omitted_from_dataset(self, tmp_path):
        rows = [
            (1, 0.125, math.inf, "no-upper-bracket", 1),
            (2, 0.25, 0.7, "converged", 25),
        ]
        path = write(tmp_path, "a.csv", phase_csv_text(8, rows))
        dataset = render_phase_diagram(
            PlotSpec((str(path),), str(tmp_path / "fig.svg"))
        )
        assert len(dataset.series[0].points) == 1
        assert dataset.series[0].omitted_rows == 1

    def test_mixed_lattice_sizes_rejected(self, tmp_path):
        first = write(tmp_path, "a.csv", phase_csv_text(8, u_curve_rows(8)))
        second = write(tmp_path, "b.csv", phase_csv_text(10, u_curve_rows(10)))
        with pytest.raises(SchemaMismatchError, match="disagree on lattice size"):
            render_phase_diagram(
                PlotSpec((str(first), str(second)), str(tmp_path / "fig.svg"))
            )

    def test_duplicate_derived_labels_need_explicit_ones(self, tmp_path):
        first = write(tmp_path, "a.csv", phase_csv_text(8, u_curve_rows(8), ratio=0.4))
        second = write(tmp_path, "b.csv", phase_csv_text(8, u_curve_rows(8), ratio=0.4))
        spec = PlotSpec((str(first), str(second)), str(tmp_path / "fig.svg"))
        with pytest.raises(PlotSpecError, match="not unique"):
            render_phase_diagram(spec)
        labeled = PlotSpec(
            (str(first), str(second)),
            str(tmp_path / "fig.svg"),
            labels=("run A", "run B"),
        )
        dataset = render_phase_diagram(labeled)
        assert [series.label for series in dataset.series] == ["run A", "run B"]

    def test_rendering_is_read_only_and_deterministic(self, tmp_path):
        paths = write_phase_series(tmp_path, 12, [0.0, 0.4])
        before = [path.read_bytes() for path in paths]
        spec = PlotSpec(tuple(map(str, paths)), str(tmp_path / "fig.png"))
        first = render_phase_diagram(spec)
        second = render_phase_diagram(spec)
        assert first == second
        assert [path.read_bytes() for path in paths] == before

    def test_png_output(self, tmp_path):
        path = write(tmp_path, "a.csv", phase_csv_text(6, u_curve_rows(6)))
        out = tmp_path / "fig.png"
        render_phase_diagram(PlotSpec((str(path),), str(out)))
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestSpectralFlow:
    def test_zero_gain_only_is_flat_and_real(self, tmp_path):
        write_dimer_flow(tmp_path, [0.0])
        out = tmp_path / "flow.svg"
        dataset = render_spectral_flow(tmp_path, out)
        assert out.stat().st_size > 0
        (point,) = dataset.points
        assert point.gamma == 0.0
        assert point.values == ((-1.0, 0.0), (1.0, 0.0))
        assert dataset.first_complex_gamma() is None

    def test_values_sorted_within_each_gamma(self, tmp_path):
        write_dimer_flow(tmp_path, [0.0, 1.5])
        dataset = render_spectral_flow(tmp_path, tmp_path / "flow.svg")
        for point in dataset.points:
            assert point.values == tuple(sorted(point.values))

    def test_unsorted_inputs_rejected(self, tmp_path):
        paths = write_dimer_flow(tmp_path, [0.8, 0.3])
        with pytest.raises(SchemaMismatchError, match="strictly increasing"):
            render_spectral_flow([str(p) for p in paths], tmp_path / "flow.svg")

    def test_bad_output_extension(self, tmp_path):
        write_dimer_flow(tmp_path, [0.0, 0.5])
        with pytest.raises(PlotSpecError, match="output must end"):
            render_spectral_flow(tmp_path, tmp_path / "flow.txt")

    def test_deterministic_dataset(self, tmp_path):
        write_dimer_flow(tmp_path, [0.0, 0.5, 1.0, 1.5])
        first = render_spectral_flow(tmp_path, tmp_path / "a.svg")
        second = render_spectral_flow(tmp_path, tmp_path / "b.svg")
        assert first == second
