"""Command execution and bit-stable artifact serialization.

Each command writes its outputs under one directory.  Artifacts embed the
fully resolved configuration (minus runtime-only keys such as the worker
count), so a job can be reproduced from any of its output files and the
bytes do not depend on how the work was parallelized.

Exit codes: 0 success, 1 validation problem, 2 numerical failure (a
non-converged threshold search or a failed verification).
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from ._version import __version__
from .config import JobConfig, config_to_dict
from .core import LatticeSpec, SpinMatrix, TunnelingProfile, assemble_hamiltonian, build_profile
from .errors import ConfigValidationError, OutOfRegimeError
from .sectors import verify_direct_sum
from .spectral import classify_spectrum, eigenvalues
from .thresholds import (
    GainRay,
    RingSpec,
    ThresholdResult,
    phase_diagram,
    ring_threshold_bisection,
    ring_threshold_formula,
    threshold_along_ray,
)

WORKERS_ENV_VAR = "PTLATTICE_WORKERS"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

CSV_HEADER = "m,mu,gamma_pt,status,evaluations"


def profile_from_config(job: JobConfig) -> TunnelingProfile:
    """Build the tunneling profile described by a chain-style job."""
    if job.profile == "constant":
        # A phase-diagram sweep over flip ratios owns t_d per series.
        t_d = job.t_d if job.t_d is not None else 0.0
        return build_profile(
            "constant", job.n_sites, job.boundary, t_s=job.t_s, t_d=t_d
        )
    if job.profile == "parabolic-sqrt":
        return build_profile(
            "parabolic-sqrt",
            job.n_sites,
            job.boundary,
            t0=job.t0,
            t_d_fraction=job.t_d_fraction,
        )
    return build_profile(
        "explicit", job.n_sites, job.boundary, bonds=job.bonds, force=job.force_bonds
    )


def ray_from_config(job: JobConfig) -> GainRay:
    s, x, z = job.ray
    return GainRay.from_components(s=s, x=x, z=z)


def ring_from_config(job: JobConfig, impurity_site: int) -> RingSpec:
    return RingSpec(
        job.n_sites,
        impurity_site,
        outer=SpinMatrix(s=job.t0_s, x=job.t0_d),
        inner=SpinMatrix(s=job.tb_s, x=job.tb_d),
    )


def resolve_workers(job: JobConfig) -> int:
    """Worker count, honoring the environment override."""
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is None:
        return job.workers
    try:
        workers = int(raw)
    except ValueError as exc:
        raise ConfigValidationError(
            f"{WORKERS_ENV_VAR}: expected an integer, got {raw!r}"
        ) from exc
    if workers < 1:
        raise ConfigValidationError(
            f"{WORKERS_ENV_VAR}: must be at least 1, got {workers}"
        )
    return workers


def _format_float(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".12g")


def _jsonable(value):
    """Recursively convert to JSON-safe primitives; non-finite floats → None."""
    if isinstance(value, dict):
        return {key: _jsonable(entry) for key, entry in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(entry) for entry in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    return value


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _write_json(path: Path, payload: dict) -> None:
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True, allow_nan=False)
    _write_text(path, text + "\n")


def _csv_text(
    job: JobConfig,
    rows: list[tuple[int, float, float, str, int]],
    series_ratio: float | None = None,
) -> str:
    metadata = json.dumps(
        _jsonable(config_to_dict(job, include_runtime=False)), sort_keys=True
    )
    lines = [f"# ptlattice {__version__} {job.command}", f"# config: {metadata}"]
    if series_ratio is not None:
        lines.append(f"# series: t_d_over_t_s={_format_float(series_ratio)}")
    lines.append(CSV_HEADER)
    for site, mu, gamma_pt, status, evaluations in rows:
        lines.append(
            f"{site},{_format_float(mu)},{_format_float(gamma_pt)},"
            f"{status},{evaluations}"
        )
    return "\n".join(lines) + "\n"


def _threshold_rows(
    sites: list[int], n_sites: int, results: list[ThresholdResult]
) -> list[tuple[int, float, float, str, int]]:
    return [
        (site, site / n_sites, result.gamma_pt, result.status, result.evaluations)
        for site, result in zip(sites, results)
    ]


def _search_kwargs(job: JobConfig, scale: float) -> dict:
    """Absolute search parameters from scale-relative config values."""
    return {
        "tolerance": job.tolerance * scale,
        "bracket_cap": job.bracket_cap * scale,
        "reality_tolerance": job.reality_tolerance * scale,
    }


def _run_spectrum(job: JobConfig, out_dir: Path) -> int:
    profile = profile_from_config(job)
    ray = ray_from_config(job)
    spec = LatticeSpec(profile, job.impurity_site, ray.direction, job.gamma)
    matrix = assemble_hamiltonian(spec)
    scale = spec.scale if spec.scale > 0.0 else 1.0
    spectrum = classify_spectrum(
        eigenvalues(matrix), scale, reality_tolerance=job.reality_tolerance * scale
    )
    payload = {
        "schema": "ptlattice.spectrum.v1",
        "version": __version__,
        "config": config_to_dict(job, include_runtime=False),
        "dimension": matrix.shape[0],
        "eigenvalues": [[value.real, value.imag] for value in spectrum.eigenvalues],
        "max_abs_imag": spectrum.max_abs_imag,
        "classification": spectrum.classification,
        "pairing_defect": spectrum.pairing_defect,
    }
    _write_json(out_dir / "spectrum.json", payload)
    return EXIT_OK


def _run_threshold(job: JobConfig, out_dir: Path) -> int:
    profile = profile_from_config(job)
    ray = ray_from_config(job)
    base = LatticeSpec(profile, job.impurity_site, ray.direction, 0.0)
    result = threshold_along_ray(base, ray, **_search_kwargs(job, profile.scale))
    rows = _threshold_rows([job.impurity_site], job.n_sites, [result])
    _write_text(out_dir / "threshold.csv", _csv_text(job, rows))
    return EXIT_OK if result.converged else EXIT_NUMERICAL


def _series_file_name(ratio: float) -> str:
    return f"phase_td_{_format_float(ratio)}.csv"


def _run_phase_diagram(job: JobConfig, out_dir: Path, workers: int) -> int:
    ray = ray_from_config(job)
    if job.t_d_over_t_s is None:
        series = [(None, profile_from_config(job))]
    else:
        series = [
            (
                ratio,
                build_profile(
                    "constant",
                    job.n_sites,
                    job.boundary,
                    t_s=job.t_s,
                    t_d=ratio * job.t_s,
                ),
            )
            for ratio in job.t_d_over_t_s
        ]
    status = EXIT_OK
    for ratio, profile in series:
        diagram = phase_diagram(
            profile,
            ray,
            job.m_values,
            workers=workers,
            **_search_kwargs(job, profile.scale),
        )
        results = [row.result for row in diagram.rows]
        rows = _threshold_rows(list(job.m_values), job.n_sites, results)
        name = "phase.csv" if ratio is None else _series_file_name(ratio)
        _write_text(out_dir / name, _csv_text(job, rows, series_ratio=ratio))
        if not all(result.converged for result in results):
            status = EXIT_NUMERICAL
    return status


def _run_ring_threshold(job: JobConfig, out_dir: Path) -> int:
    rings = [ring_from_config(job, site) for site in job.m_values]
    scale = rings[0].profile().scale
    kwargs = _search_kwargs(job, scale)
    try:
        formula = ring_threshold_formula(rings[0])
        formula_note = None
    except OutOfRegimeError as exc:
        formula = None
        formula_note = str(exc)
    rows = []
    all_converged = True
    for ring in rings:
        result = ring_threshold_bisection(ring, **kwargs)
        all_converged = all_converged and result.converged
        rows.append(
            {
                "m": ring.impurity_site,
                "mu": ring.impurity_site / job.n_sites,
                "gamma_pt": result.gamma_pt,
                "status": result.status,
                "evaluations": result.evaluations,
            }
        )
    payload = {
        "schema": "ptlattice.ring_threshold.v1",
        "version": __version__,
        "config": config_to_dict(job, include_runtime=False),
        "formula_threshold": formula,
        "formula_note": formula_note,
        "rows": rows,
    }
    _write_json(out_dir / "ring_threshold.json", payload)
    return EXIT_OK if all_converged else EXIT_NUMERICAL


def _run_verify(job: JobConfig, out_dir: Path) -> int:
    profile = profile_from_config(job)
    ray = ray_from_config(job)
    spec = LatticeSpec(profile, job.impurity_site, ray.direction, job.gamma)
    scale = profile.scale if profile.scale > 0.0 else 1.0
    report = verify_direct_sum(spec, tolerance=job.tolerance * scale)
    payload = {
        "schema": "ptlattice.verify.v1",
        "version": __version__,
        "config": config_to_dict(job, include_runtime=False),
        "max_multiset_distance": report.max_multiset_distance,
        "tolerance": report.tolerance,
        "basis": report.basis,
        "dimension": report.dimension,
        "pass": report.passed,
    }
    _write_json(out_dir / "verify.json", payload)
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def run_command(job: JobConfig, out_dir: str | os.PathLike | None = None) -> int:
    """Execute a job and write its artifacts; returns the process exit code."""
    target = Path(out_dir) if out_dir is not None else Path(job.out_dir)
    workers = resolve_workers(job)
    if job.command == "spectrum":
        return _run_spectrum(job, target)
    if job.command == "threshold":
        return _run_threshold(job, target)
    if job.command == "phase-diagram":
        return _run_phase_diagram(job, target, workers)
    if job.command == "ring-threshold":
        return _run_ring_threshold(job, target)
    if job.command == "verify":
        return _run_verify(job, target)
    raise ConfigValidationError(f"unknown command {job.command!r}")
