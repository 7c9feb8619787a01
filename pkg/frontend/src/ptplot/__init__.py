"""Plot kit for lattice sweep outputs: phase diagrams and spectral flow.

Consumes only the documented CSV/JSON file formats; the lattice package
itself is not imported and need not be installed.
"""

from __future__ import annotations

from .errors import (
    MissingFileError,
    PlotSpecError,
    PtPlotError,
    SchemaMismatchError,
)
from .io import (
    PHASE_HEADER,
    SPECTRUM_SCHEMA,
    FlowData,
    PhaseRow,
    PhaseSeries,
    SpectrumPoint,
    read_flow_inputs,
    read_phase_csv,
    read_spectrum_json,
)
from .plots import (
    IMAGE_FORMATS,
    MARKERS,
    FlowDataset,
    FlowPoint,
    PhaseDataset,
    PlotSpec,
    PlottedPoint,
    PlottedSeries,
    render_phase_diagram,
    render_spectral_flow,
)

__all__ = [
    "FlowData",
    "FlowDataset",
    "FlowPoint",
    "IMAGE_FORMATS",
    "MARKERS",
    "MissingFileError",
    "PHASE_HEADER",
    "PhaseDataset",
    "PhaseRow",
    "PhaseSeries",
    "PlotSpec",
    "PlotSpecError",
    "PlottedPoint",
    "PlottedSeries",
    "PtPlotError",
    "SPECTRUM_SCHEMA",
    "SchemaMismatchError",
    "SpectrumPoint",
    "read_flow_inputs",
    "read_phase_csv",
    "read_spectrum_json",
    "render_phase_diagram",
    "render_spectral_flow",
]

__version__ = "0.1.0"
