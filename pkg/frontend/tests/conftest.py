"""Factories that synthesize files in the lattice CLI's documented formats.

The plot kit's entire contract with the producer is these file shapes, so
the fixtures construct them byte-for-byte the way the producer writes them:
``#`` comment lines (tool version, embedded config JSON, optional series
ratio), the fixed CSV header, 12-significant-digit floats, ``\n`` newlines.
"""

from __future__ import annotations

import cmath
import json
import math
from pathlib import Path

PHASE_HEADER = "m,mu,gamma_pt,status,evaluations"


def phase_csv_text(n_sites, rows, *, t_s=1.0, ratio=None):
    config = {
        "N": n_sites,
        "boundary": "open",
        "bracket_cap": 8.0,
        "command": "phase-diagram",
        "profile": "constant",
        "ray": "tau_z",
        "reality_tolerance": 1e-08,
        "t_s": t_s,
        "tolerance": 0.0001,
    }
    lines = [
        "# ptlattice 0.1.0 phase-diagram",
        f"# config: {json.dumps(config, sort_keys=True)}",
    ]
    if ratio is not None:
        lines.append(f"# series: t_d_over_t_s={ratio:.12g}")
    lines.append(PHASE_HEADER)
    for m, mu, gamma, status, evaluations in rows:
        gamma_text = "inf" if math.isinf(gamma) else f"{gamma:.12g}"
        lines.append(f"{m},{mu:.12g},{gamma_text},{status},{evaluations}")
    return "\n".join(lines) + "\n"


def u_curve_rows(n_sites, t_s=1.0, t_d=0.0):
    """Plausible threshold-vs-site rows: rise from the edge, peak, fall back."""
    rows = []
    half = n_sites // 2
    for m in range(1, half + 1):
        gamma = (t_s - t_d) * (0.3 + 0.7 * math.sin(math.pi * m / (half + 1)))
        rows.append((m, m / n_sites, gamma, "converged", 30 + m % 3))
    return rows


def write_phase_series(directory, n_sites, ratios, t_s=1.0):
    paths = []
    for ratio in ratios:
        rows = u_curve_rows(n_sites, t_s, ratio * t_s)
        path = Path(directory) / f"phase_td_{ratio:g}.csv"
        path.write_text(
            phase_csv_text(n_sites, rows, t_s=t_s, ratio=ratio), encoding="utf-8"
        )
        paths.append(path)
    return paths


def spectrum_json_text(gamma, eigenvalues, *, reality_tolerance=1e-8):
    pairs = sorted([float(value.real), float(value.imag)] for value in eigenvalues)
    max_abs_imag = max(abs(pair[1]) for pair in pairs)
    document = {
        "classification": (
            "unbroken" if max_abs_imag <= reality_tolerance else "broken"
        ),
        "config": {
            "N": max(len(pairs) // 2, 1),
            "boundary": "open",
            "command": "spectrum",
            "gamma": gamma,
            "m": 1,
            "profile": "constant",
            "ray": "identity",
            "reality_tolerance": 1e-08,
            "t_s": 1.0,
        },
        "dimension": len(pairs),
        "eigenvalues": pairs,
        "max_abs_imag": max_abs_imag,
        "pairing_defect": 0.0,
        "schema": "ptlattice.spectrum.v1",
        "version": "0.1.0",
    }
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def dimer_eigenvalues(gamma, t=1.0):
    """Closed form for the balanced two-site system: ±sqrt(t² − γ²)."""
    root = cmath.sqrt(complex(t * t - gamma * gamma, 0.0))
    return (root, -root)


def write_dimer_flow(directory, gammas, t=1.0):
    paths = []
    for index, gamma in enumerate(gammas):
        path = Path(directory) / f"flow_{index:04d}.json"
        path.write_text(
            spectrum_json_text(gamma, dimer_eigenvalues(gamma, t)), encoding="utf-8"
        )
        paths.append(path)
    return paths
