"""Error hierarchy for the plot kit."""

from __future__ import annotations


class PtPlotError(Exception):
    """Base class for all plot-kit errors."""


class MissingFileError(PtPlotError):
    """An input file does not exist or cannot be read."""


class SchemaMismatchError(PtPlotError):
    """An input file does not conform to the documented CSV/JSON schema,
    or a set of inputs is mutually inconsistent (mixed lattice sizes,
    non-increasing gain values)."""


class PlotSpecError(PtPlotError, ValueError):
    """A plot specification violates its own invariants (label/path count
    mismatch, duplicate labels, unsupported image format)."""
