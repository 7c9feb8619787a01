"""Breaking-threshold search: bisection over the gain scale, sweeps, ring formula."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .core import (
    LatticeSpec,
    SpinMatrix,
    TunnelingProfile,
    assemble_hamiltonian,
    validate_impurity_site,
)
from .errors import (
    AmplitudeBoundError,
    NegativeAmplitudeError,
    OutOfRegimeError,
    SpecValidationError,
)
from .sectors import ScalarLatticeSpec, assemble_scalar_hamiltonian, decompose
from .spectral import REALITY_TOLERANCE_FACTOR, eigenvalues

#: Default bisection tolerance and bracket cap, as fractions of the scale.
TOLERANCE_FACTOR = 1e-4
BRACKET_CAP_FACTOR = 8.0

#: Number of evenly spaced points in the post-convergence monotonicity scan.
VALIDATION_POINTS = 16

CONVERGED = "converged"
CONVERGED_REENTRANT = "converged-reentrant"
NO_UPPER_BRACKET = "no-upper-bracket"
ALWAYS_BROKEN = "always-broken"


@dataclass(frozen=True)
class GainRay:
    """One-parameter gain family ``gamma * direction`` with ``gamma >= 0``.

    The direction must be normalized so that its largest component has
    magnitude 1; :meth:`from_components` normalizes arbitrary nonzero
    component triples.
    """

    direction: SpinMatrix

    def __post_init__(self) -> None:
        magnitude = self.direction.magnitude
        if magnitude == 0.0:
            raise SpecValidationError("gain ray direction must be nonzero")
        if abs(magnitude - 1.0) > 1e-12:
            raise SpecValidationError(
                "gain ray direction must have unit largest component, "
                f"got magnitude {magnitude}"
            )

    @classmethod
    def from_components(cls, s: float = 0.0, x: float = 0.0, z: float = 0.0) -> GainRay:
        direction = SpinMatrix(s, x, z)
        if direction.magnitude == 0.0:
            raise SpecValidationError("gain ray direction must be nonzero")
        return cls(direction.scaled(1.0 / direction.magnitude))


TAU_Z = GainRay(SpinMatrix(z=1.0))
TAU_X = GainRay(SpinMatrix(x=1.0))
IDENTITY_RAY = GainRay(SpinMatrix(s=1.0))

RAY_NAMES = {
    "tau_z": TAU_Z,
    "tau_x": TAU_X,
    "identity": IDENTITY_RAY,
}


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of one bisection search along a gain ray.

    On a converged search, ``bracket`` holds the final unbroken/broken
    pair with width at most ``tolerance`` and ``gamma_pt`` is its
    midpoint. A search that never finds a broken spectrum below the cap
    reports ``no-upper-bracket`` with an infinite ``gamma_pt``.
    """

    gamma_pt: float
    bracket: tuple[float, float]
    tolerance: float
    evaluations: int
    status: str

    @property
    def converged(self) -> bool:
        return self.status in (CONVERGED, CONVERGED_REENTRANT)


def _assemble(spec) -> np.ndarray:
    if isinstance(spec, ScalarLatticeSpec):
        return assemble_scalar_hamiltonian(spec)
    return assemble_hamiltonian(spec)


def find_threshold(
    spec_at: Callable[[float], LatticeSpec | ScalarLatticeSpec],
    *,
    scale: float,
    tolerance: float | None = None,
    bracket_cap: float | None = None,
    reality_tolerance: float | None = None,
) -> ThresholdResult:
    """Locate the smallest gain scale at which the spectrum turns nonreal.

    ``spec_at`` maps a gain scale to a lattice (full or scalar) and must
    be Hermitian, hence unbroken, at zero. An upper probe is doubled
    from ``scale / 2`` up to ``bracket_cap`` until the spectrum breaks,
    the bracket is bisected down to ``tolerance``, and the midpoint is
    returned. Afterwards ``VALIDATION_POINTS`` evenly spaced scales
    below the bracket are re-tested; if any of them is already broken
    the status is downgraded to ``converged-reentrant`` instead of
    failing. Defaults: ``tolerance = 1e-4 * scale``, ``bracket_cap =
    8 * scale``, reality tolerance ``1e-8 * scale``.
    """
    scale = float(scale)
    if not scale > 0.0 or not math.isfinite(scale):
        raise SpecValidationError(f"scale must be positive and finite, got {scale}")
    tolerance = TOLERANCE_FACTOR * scale if tolerance is None else float(tolerance)
    if not tolerance > 0.0:
        raise SpecValidationError(f"tolerance must be positive, got {tolerance}")
    bracket_cap = BRACKET_CAP_FACTOR * scale if bracket_cap is None else float(bracket_cap)
    if not bracket_cap > 0.0:
        raise SpecValidationError(f"bracket cap must be positive, got {bracket_cap}")
    if reality_tolerance is None:
        reality_tolerance = REALITY_TOLERANCE_FACTOR * scale

    evaluations = 0

    def is_broken(gamma: float) -> bool:
        nonlocal evaluations
        evaluations += 1
        w = eigenvalues(_assemble(spec_at(gamma)))
        return bool(np.max(np.abs(w.imag)) > reality_tolerance)

    if is_broken(0.0):
        return ThresholdResult(0.0, (0.0, 0.0), tolerance, evaluations, ALWAYS_BROKEN)

    lo = 0.0
    hi = None
    probe = scale / 2.0
    while probe <= bracket_cap * (1.0 + 1e-12):
        if is_broken(probe):
            hi = probe
            break
        lo = probe
        probe *= 2.0
    if hi is None:
        return ThresholdResult(
            math.inf, (lo, math.inf), tolerance, evaluations, NO_UPPER_BRACKET
        )

    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if is_broken(mid):
            hi = mid
        else:
            lo = mid

    reentrant = False
    if lo > 0.0:
        reentrant = any(
            is_broken(g) for g in np.linspace(0.0, lo, VALIDATION_POINTS)
        )
    status = CONVERGED_REENTRANT if reentrant else CONVERGED
    return ThresholdResult(0.5 * (lo + hi), (lo, hi), tolerance, evaluations, status)


def gain_ray_family(base: LatticeSpec, ray: GainRay) -> Callable[[float], LatticeSpec]:
    """Map a gain scale to ``base`` with its gain replaced by ``gamma * ray``."""

    def spec_at(gamma: float) -> LatticeSpec:
        return replace(base, gain=ray.direction, gain_scale=gamma)

    return spec_at


def threshold_along_ray(
    base: LatticeSpec,
    ray: GainRay,
    tolerance: float | None = None,
    *,
    bracket_cap: float | None = None,
    reality_tolerance: float | None = None,
) -> ThresholdResult:
    """Bisect the full-matrix threshold of ``base`` along ``ray``."""
    return find_threshold(
        gain_ray_family(base, ray),
        scale=base.scale,
        tolerance=tolerance,
        bracket_cap=bracket_cap,
        reality_tolerance=reality_tolerance,
    )


def sector_threshold_min(
    spec: LatticeSpec,
    ray: GainRay,
    tolerance: float | None = None,
    *,
    bracket_cap: float | None = None,
    reality_tolerance: float | None = None,
) -> float:
    """Threshold of a decomposable lattice via its two scalar sectors.

    The lattice is decomposed with the ray direction as gain, each
    sector is bisected independently on the shared gain axis, and the
    smaller threshold is returned. A sector that never breaks below the
    cap (for instance one whose impurity component vanishes) counts as
    infinite.
    """
    base = replace(spec, gain=ray.direction, gain_scale=1.0)
    sectors = decompose(base)
    scale = spec.scale
    best = math.inf
    for sector in (sectors.plus, sectors.minus):
        unit_strength = sector.impurity_strength

        def sector_at(gamma: float, _sector=sector, _unit=unit_strength):
            return replace(_sector, impurity_strength=gamma * _unit)

        result = find_threshold(
            sector_at,
            scale=scale,
            tolerance=tolerance,
            bracket_cap=bracket_cap,
            reality_tolerance=reality_tolerance,
        )
        if result.converged:
            best = min(best, result.gamma_pt)
    return best


@dataclass(frozen=True)
class PhaseRow:
    """One impurity position of a sweep, with its threshold search outcome."""

    site: int
    mu: float
    result: ThresholdResult


@dataclass(frozen=True)
class PhaseDiagram:
    """Threshold versus relative impurity position ``mu = site / N``."""

    rows: tuple[PhaseRow, ...]
    n_sites: int
    boundary: str
    direction: SpinMatrix
    tolerance: float


def _phase_task(task) -> ThresholdResult:
    profile, site, ray, tolerance, bracket_cap, reality_tolerance = task
    base = LatticeSpec(profile, site, ray.direction, 0.0)
    return threshold_along_ray(
        base,
        ray,
        tolerance=tolerance,
        bracket_cap=bracket_cap,
        reality_tolerance=reality_tolerance,
    )


def phase_diagram(
    profile: TunnelingProfile,
    ray: GainRay,
    m_values: Sequence[int] | None = None,
    *,
    tolerance: float | None = None,
    bracket_cap: float | None = None,
    reality_tolerance: float | None = None,
    workers: int = 1,
) -> PhaseDiagram:
    """Thresholds for a range of impurity positions on one profile.

    Rows come back in increasing site order and carry their own search
    status, so a single failed bracket does not abort the sweep. The
    positions default to every admissible site ``1 .. N // 2``. Rows are
    independent; with ``workers > 1`` they are computed in a process
    pool and reassembled in input order, so the result does not depend
    on the worker count.
    """
    n = profile.n_sites
    if m_values is None:
        m_values = range(1, n // 2 + 1)
    sites = [validate_impurity_site(n, m) for m in m_values]
    if not sites:
        raise SpecValidationError("at least one impurity position is required")
    if any(b <= a for a, b in zip(sites, sites[1:])):
        raise SpecValidationError("impurity positions must be strictly increasing")
    if tolerance is None:
        tolerance = TOLERANCE_FACTOR * profile.scale
    tasks = [
        (profile, site, ray, tolerance, bracket_cap, reality_tolerance)
        for site in sites
    ]
    if workers <= 1:
        results = [_phase_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_phase_task, tasks))
    rows = tuple(
        PhaseRow(site, site / n, result) for site, result in zip(sites, results)
    )
    return PhaseDiagram(rows, n, profile.boundary, ray.direction, float(tolerance))


@dataclass(frozen=True)
class RingSpec:
    """Periodic chain whose two arcs between the impurity pair differ.

    Bonds strictly between the impurity site and its mirror, walking in
    the increasing-index direction, carry ``inner``; every other bond,
    including the wrap-around bond, carries ``outer``. Both couplings
    must be flip-plane matrices (zero split component).
    """

    n_sites: int
    impurity_site: int
    outer: SpinMatrix
    inner: SpinMatrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_sites", int(self.n_sites))
        object.__setattr__(
            self,
            "impurity_site",
            validate_impurity_site(self.n_sites, self.impurity_site),
        )
        for name in ("outer", "inner"):
            coupling = getattr(self, name)
            if not isinstance(coupling, SpinMatrix):
                raise SpecValidationError(f"{name} coupling must be a SpinMatrix")
            if coupling.z != 0.0:
                raise SpecValidationError(
                    f"{name} coupling must have zero split component"
                )
            if coupling.s < 0.0:
                raise NegativeAmplitudeError(
                    f"{name} coupling has negative amplitude {coupling.s}"
                )
            if abs(coupling.x) > coupling.s:
                raise AmplitudeBoundError(
                    f"{name} flip amplitude exceeds its preserving amplitude"
                )

    @property
    def mirror_site(self) -> int:
        return self.n_sites + 1 - self.impurity_site

    def profile(self) -> TunnelingProfile:
        bonds = tuple(
            self.inner if self.impurity_site <= k < self.mirror_site else self.outer
            for k in range(1, self.n_sites + 1)
        )
        return TunnelingProfile(self.n_sites, "periodic", bonds)

    def lattice_spec(self, gain_scale: float = 0.0) -> LatticeSpec:
        """Ring with a plain ``+-i*gamma`` impurity pair acting on both modes."""
        return LatticeSpec(
            self.profile(), self.impurity_site, SpinMatrix(s=1.0), gain_scale
        )


def ring_threshold_formula(ring: RingSpec) -> float:
    """Closed-form ring threshold: the smaller sector difference of the arcs.

    The sector combinations of each arc coupling are ``s + x`` and
    ``s - x``; the threshold is the smaller of the two differences
    between the outer and inner arcs and does not depend on where the
    impurity pair sits. Raises when either difference is negative,
    outside the stated regime of the expression.
    """
    diff_plus = (ring.outer.s + ring.outer.x) - (ring.inner.s + ring.inner.x)
    diff_minus = (ring.outer.s - ring.outer.x) - (ring.inner.s - ring.inner.x)
    if diff_plus < 0.0 or diff_minus < 0.0:
        raise OutOfRegimeError(
            f"sector arc differences ({diff_plus}, {diff_minus}) must both "
            "be nonnegative for the closed form to apply"
        )
    return min(diff_plus, diff_minus)


def ring_threshold_bisection(
    ring: RingSpec,
    tolerance: float | None = None,
    *,
    bracket_cap: float | None = None,
    reality_tolerance: float | None = None,
) -> ThresholdResult:
    """Full-matrix bisection threshold of the assembled ring."""
    return threshold_along_ray(
        ring.lattice_spec(),
        IDENTITY_RAY,
        tolerance=tolerance,
        bracket_cap=bracket_cap,
        reality_tolerance=reality_tolerance,
    )
