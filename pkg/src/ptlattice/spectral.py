"""Dense complex spectra and their reality classification."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    SpecValidationError,
    ZeroVectorError,
)

#: Largest matrix dimension accepted by the dense solver.
DIMENSION_CAP = 4096

#: Default reality tolerance, as a fraction of the energy scale.
REALITY_TOLERANCE_FACTOR = 1e-8

UNBROKEN = "unbroken"
BROKEN = "broken"


def _checked(matrix, dimension_cap: int) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise SpecValidationError("matrix entries must be finite")
    if m.shape[0] > dimension_cap:
        raise SpecValidationError(
            f"dimension {m.shape[0]} exceeds the cap {dimension_cap}"
        )
    return m


def eigenvalues(matrix, *, dimension_cap: int = DIMENSION_CAP) -> np.ndarray:
    """All eigenvalues of a dense complex matrix, sorted by (Re, Im).

    Backed by LAPACK's Hessenberg-reduction plus shifted-QR driver. The
    full multiset is returned; a convergence failure aborts the whole
    call with no partial results.
    """
    m = _checked(matrix, dimension_cap)
    try:
        w = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    return w[np.lexsort((w.imag, w.real))]


def eigenpairs(matrix, *, dimension_cap: int = DIMENSION_CAP):
    """Eigenvalues sorted as in :func:`eigenvalues`, with matching eigenvector columns."""
    m = _checked(matrix, dimension_cap)
    try:
        w, v = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    order = np.lexsort((w.imag, w.real))
    return w[order], v[:, order]


def multiset_distance(a, b) -> float:
    """Greedy matching distance between two equal-size complex multisets.

    Both sets are sorted by (Re, Im); each element of the first is then
    paired with the nearest still-unused element of the second, and the
    largest paired distance is returned.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        raise DimensionMismatchError(
            f"multisets differ in size: {a.size} vs {b.size}"
        )
    if a.size == 0:
        return 0.0
    a = np.sort_complex(a)
    b = np.sort_complex(b)
    free = np.ones(b.size, dtype=bool)
    worst = 0.0
    for value in a:
        idx = np.flatnonzero(free)
        dist = np.abs(b[idx] - value)
        pick = int(np.argmin(dist))
        free[idx[pick]] = False
        worst = max(worst, float(dist[pick]))
    return worst


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset with its reality classification.

    ``pairing_defect`` is the matching distance between the multiset and
    its own complex conjugate; it vanishes (to solver accuracy) whenever
    the producing matrix has a real characteristic polynomial.
    """

    eigenvalues: tuple[complex, ...]
    max_abs_imag: float
    classification: str
    pairing_defect: float

    @property
    def is_unbroken(self) -> bool:
        return self.classification == UNBROKEN


def classify_spectrum(eigs, scale: float, reality_tolerance: float | None = None) -> Spectrum:
    """Label a spectrum ``unbroken`` iff every eigenvalue is real within tolerance.

    ``reality_tolerance`` defaults to ``1e-8 * scale`` with ``scale`` the
    largest tunneling amplitude of the producing lattice.
    """
    w = np.asarray(eigs, dtype=complex).ravel()
    if reality_tolerance is None:
        reality_tolerance = REALITY_TOLERANCE_FACTOR * float(scale)
    if not reality_tolerance > 0.0:
        raise SpecValidationError(
            f"reality tolerance must be positive, got {reality_tolerance}"
        )
    worst_imag = float(np.max(np.abs(w.imag))) if w.size else 0.0
    defect = multiset_distance(w, np.conj(w))
    label = UNBROKEN if worst_imag <= reality_tolerance else BROKEN
    return Spectrum(tuple(np.sort_complex(w).tolist()), worst_imag, label, defect)


def residual_check(matrix, value: complex, vector) -> float:
    """Relative residual ``|M v - value*v| / (|M|_F * |v|)`` of a candidate eigenpair."""
    m = np.asarray(matrix, dtype=complex)
    v = np.asarray(vector, dtype=complex).ravel()
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != v.size:
        raise DimensionMismatchError(
            f"matrix shape {m.shape} does not match vector length {v.size}"
        )
    vector_norm = float(np.linalg.norm(v))
    if vector_norm == 0.0:
        raise ZeroVectorError("candidate eigenvector has zero norm")
    residual = float(np.linalg.norm(m @ v - value * v))
    matrix_norm = float(np.linalg.norm(m))
    if matrix_norm == 0.0:
        return 0.0 if residual == 0.0 else math.inf
    return residual / (matrix_norm * vector_norm)
