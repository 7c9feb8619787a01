"""Lattice model types and Hamiltonian assembly.

A chain of N sites carries a two-state internal mode on every site.
Nearest-neighbour couplings and the on-site impurity are real symmetric
2x2 matrices; balanced +i/-i multiples of the gain matrix sit on a site
and on its mirror image, which keeps the assembled matrix invariant
under combined site reversal and complex conjugation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import (
    AmplitudeBoundError,
    BadLengthError,
    CenterImpurityError,
    DimensionMismatchError,
    NegativeAmplitudeError,
    NonParitySymmetricError,
    SpecValidationError,
)

Boundary = Literal["open", "periodic"]

BOUNDARIES = ("open", "periodic")

#: Componentwise tolerance, relative to the largest amplitude, for the
#: mirror-symmetry check on bond lists.
PARITY_TOLERANCE = 1e-12

#: Tolerance factor for the symmetry check on assembled matrices,
#: relative to the largest matrix entry.
PT_CHECK_TOLERANCE = 1e-12


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise SpecValidationError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SpinMatrix:
    """Real symmetric 2x2 coupling written as ``s*1 + x*flip + z*split``.

    ``flip`` is the off-diagonal unit matrix (swaps the two internal
    modes) and ``split`` the traceless diagonal one, so the represented
    matrix is ``[[s + z, x], [x, s - z]]``.
    """

    s: float = 0.0
    x: float = 0.0
    z: float = 0.0

    def __post_init__(self) -> None:
        for name in ("s", "x", "z"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))

    def matrix(self) -> np.ndarray:
        return np.array([[self.s + self.z, self.x], [self.x, self.s - self.z]])

    def scaled(self, factor: float) -> SpinMatrix:
        return SpinMatrix(factor * self.s, factor * self.x, factor * self.z)

    @property
    def magnitude(self) -> float:
        """Largest absolute component; the natural amplitude scale."""
        return max(abs(self.s), abs(self.x), abs(self.z))

    @property
    def is_zero(self) -> bool:
        return self.s == 0.0 and self.x == 0.0 and self.z == 0.0


def validate_impurity_site(n_sites: int, site: int) -> int:
    """Validate a gain-site index against its mirror ``N + 1 - site``.

    The site must lie in ``[1, N // 2]``; the centre site of an odd
    chain coincides with its own mirror, where the balanced +i/-i pair
    would cancel, and is rejected with a dedicated error.
    """
    site = int(site)
    if site == n_sites + 1 - site:
        raise CenterImpurityError(
            f"site {site} of a {n_sites}-site chain is its own mirror image; "
            "the balanced impurity pair needs two distinct sites"
        )
    if not 1 <= site <= n_sites // 2:
        raise SpecValidationError(
            f"impurity site must lie in [1, {n_sites // 2}] "
            f"for {n_sites} sites, got {site}"
        )
    return site


@dataclass(frozen=True)
class TunnelingProfile:
    """Mirror-symmetric list of bond couplings for an N-site chain.

    ``bonds[k-1]`` couples site ``k`` to site ``k+1``. An open chain has
    ``N - 1`` bonds; a periodic one has ``N``, the last entry closing the
    ring from site ``N`` back to site ``1``. Bond ``k`` must equal bond
    ``N - k``, so the couplings read the same from either chain end (the
    wrap-around bond is its own mirror and is unconstrained).
    """

    n_sites: int
    boundary: Boundary
    bonds: tuple[SpinMatrix, ...]

    def __post_init__(self) -> None:
        n = int(self.n_sites)
        object.__setattr__(self, "n_sites", n)
        if n < 2:
            raise SpecValidationError(f"need at least 2 sites, got {n}")
        if self.boundary not in BOUNDARIES:
            raise SpecValidationError(
                f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}"
            )
        bonds = tuple(self.bonds)
        object.__setattr__(self, "bonds", bonds)
        expected = n - 1 if self.boundary == "open" else n
        if len(bonds) != expected:
            raise BadLengthError(
                f"{self.boundary} boundary with {n} sites needs "
                f"{expected} bonds, got {len(bonds)}"
            )
        for k, bond in enumerate(bonds, start=1):
            if not isinstance(bond, SpinMatrix):
                raise SpecValidationError(f"bond {k} is not a SpinMatrix")
            if bond.s < 0.0:
                raise NegativeAmplitudeError(
                    f"bond {k} has negative mode-preserving amplitude {bond.s}"
                )
        tol = PARITY_TOLERANCE * max(self.scale, 1.0)
        for k in range(1, n):
            a, b = bonds[k - 1], bonds[n - k - 1]
            if max(abs(a.s - b.s), abs(a.x - b.x), abs(a.z - b.z)) > tol:
                raise NonParitySymmetricError(
                    f"bond {k} and bond {n - k} differ; "
                    "the profile must be mirror symmetric"
                )

    @property
    def scale(self) -> float:
        """Largest amplitude over all bonds; the reference energy unit."""
        return max((b.magnitude for b in self.bonds), default=0.0)


def _check_family_amplitudes(preserving: float, flipping: float) -> None:
    if preserving < 0.0 or flipping < 0.0:
        raise NegativeAmplitudeError(
            f"amplitudes must be nonnegative, got ({preserving}, {flipping})"
        )
    if flipping > preserving:
        raise AmplitudeBoundError(
            f"mode-flip amplitude {flipping} exceeds "
            f"mode-preserving amplitude {preserving}"
        )


def _bond_count(n_sites: int, boundary: str) -> int:
    if boundary not in BOUNDARIES:
        raise SpecValidationError(
            f"boundary must be one of {BOUNDARIES}, got {boundary!r}"
        )
    return n_sites - 1 if boundary == "open" else n_sites


def constant_profile(
    n_sites: int, t_s: float, t_d: float = 0.0, boundary: Boundary = "open"
) -> TunnelingProfile:
    """Uniform couplings: every bond is ``t_s*1 + t_d*flip``."""
    _check_family_amplitudes(t_s, t_d)
    bond = SpinMatrix(s=t_s, x=t_d)
    count = _bond_count(n_sites, boundary)
    return TunnelingProfile(n_sites, boundary, (bond,) * count)


def parabolic_sqrt_profile(
    n_sites: int, t0: float, t_d_fraction: float = 0.0, boundary: Boundary = "open"
) -> TunnelingProfile:
    """Bond k carries amplitude ``t0 * sqrt(k * (N - k))``.

    The flip component of each bond is ``t_d_fraction`` times its
    preserving component; the fraction must lie in [0, 1].
    """
    if t0 < 0.0:
        raise NegativeAmplitudeError(f"t0 must be nonnegative, got {t0}")
    if not 0.0 <= t_d_fraction <= 1.0:
        raise AmplitudeBoundError(
            f"flip fraction must lie in [0, 1], got {t_d_fraction}"
        )
    count = _bond_count(n_sites, boundary)
    bonds = []
    for k in range(1, count + 1):
        amp = t0 * math.sqrt(k * (n_sites - k))
        bonds.append(SpinMatrix(s=amp, x=t_d_fraction * amp))
    return TunnelingProfile(n_sites, boundary, tuple(bonds))


def explicit_profile(
    n_sites: int,
    bonds: Sequence,
    boundary: Boundary = "open",
    force: bool = False,
) -> TunnelingProfile:
    """Profile from an explicit bond list.

    Entries may be SpinMatrix instances, plain numbers (preserving
    amplitude only), or 2/3-sequences ``(s, x)`` / ``(s, x, z)``. The
    bound ``|x| <= s`` is enforced per bond unless ``force`` is set;
    mirror symmetry and nonnegative ``s`` are enforced regardless.
    """
    coerced = []
    for k, raw in enumerate(bonds, start=1):
        if isinstance(raw, SpinMatrix):
            bond = raw
        elif isinstance(raw, (int, float)):
            bond = SpinMatrix(s=raw)
        elif isinstance(raw, Sequence) and 2 <= len(raw) <= 3:
            bond = SpinMatrix(*raw)
        else:
            raise SpecValidationError(
                f"bond {k} must be a number, a 2/3-sequence or a SpinMatrix"
            )
        if bond.s < 0.0:
            raise NegativeAmplitudeError(
                f"bond {k} preserving amplitude must be nonnegative, got {bond.s}"
            )
        if not force and abs(bond.x) > bond.s:
            raise AmplitudeBoundError(
                f"bond {k} flip amplitude {bond.x} exceeds its preserving "
                f"amplitude {bond.s}; pass force=True to allow this"
            )
        coerced.append(bond)
    return TunnelingProfile(n_sites, boundary, tuple(coerced))


PROFILE_KINDS = ("constant", "parabolic-sqrt", "explicit")


def build_profile(
    kind: str, n_sites: int, boundary: Boundary = "open", **params
) -> TunnelingProfile:
    """Dispatch to one of the built-in profile families by name."""
    if kind == "constant":
        return constant_profile(n_sites, boundary=boundary, **params)
    if kind == "parabolic-sqrt":
        return parabolic_sqrt_profile(n_sites, boundary=boundary, **params)
    if kind == "explicit":
        return explicit_profile(n_sites, boundary=boundary, **params)
    raise SpecValidationError(
        f"unknown profile kind {kind!r}; expected one of {PROFILE_KINDS}"
    )


@dataclass(frozen=True)
class LatticeSpec:
    """Full problem definition: profile, impurity pair, gain matrix, scale.

    The gain matrix enters the assembled matrix as
    ``+i * gain_scale * gain`` on ``impurity_site`` and as
    ``-i * gain_scale * gain`` on the mirror site ``N + 1 - impurity_site``.
    """

    profile: TunnelingProfile
    impurity_site: int
    gain: SpinMatrix
    gain_scale: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "impurity_site",
            validate_impurity_site(self.profile.n_sites, self.impurity_site),
        )
        if not isinstance(self.gain, SpinMatrix):
            raise SpecValidationError("gain must be a SpinMatrix")
        scale = _require_finite("gain_scale", self.gain_scale)
        if scale < 0.0:
            raise SpecValidationError(f"gain_scale must be nonnegative, got {scale}")
        object.__setattr__(self, "gain_scale", scale)

    @property
    def n_sites(self) -> int:
        return self.profile.n_sites

    @property
    def boundary(self) -> Boundary:
        return self.profile.boundary

    @property
    def mirror_site(self) -> int:
        return self.n_sites + 1 - self.impurity_site

    @property
    def scale(self) -> float:
        return self.profile.scale


def assemble_hamiltonian(spec: LatticeSpec) -> np.ndarray:
    """Assemble the dense 2N x 2N single-particle matrix.

    Basis ordering contract: the state (site k, mode sigma) occupies
    index ``2*(k - 1) + (0 if sigma == '+' else 1)``, i.e. site-major
    with the mode interleaved. Bond k contributes ``-T(k)`` between the
    2x2 blocks of sites k and k+1 in both directions; the impurity
    contributes ``+i * gain_scale * gain`` on the impurity site and the
    opposite sign on the mirror site.
    """
    n = spec.n_sites
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    for k, bond in enumerate(spec.profile.bonds, start=1):
        a = 2 * (k - 1)
        b = 2 * (k % n)
        block = -bond.matrix()
        h[a : a + 2, b : b + 2] += block
        h[b : b + 2, a : a + 2] += block.T
    g = 1j * spec.gain_scale * spec.gain.matrix()
    i = 2 * (spec.impurity_site - 1)
    j = 2 * (spec.mirror_site - 1)
    h[i : i + 2, i : i + 2] += g
    h[j : j + 2, j : j + 2] -= g
    return h


def parity_permutation(n_sites: int) -> np.ndarray:
    """Index permutation for site reversal ``k -> N + 1 - k``, identity on the mode."""
    sites = np.arange(n_sites)[::-1]
    return np.column_stack((2 * sites, 2 * sites + 1)).reshape(-1)


def check_pt_symmetry(h: np.ndarray, n_sites: int) -> bool:
    """True iff reversing sites and conjugating entries reproduces ``h``.

    Time reversal acts as plain entrywise complex conjugation and
    leaves the internal mode untouched; a mode-flipping variant is not
    implemented. The comparison is entrywise within ``1e-12`` of the
    largest matrix entry.
    """
    h = np.asarray(h)
    if h.shape != (2 * n_sites, 2 * n_sites):
        raise DimensionMismatchError(
            f"expected shape {(2 * n_sites, 2 * n_sites)}, got {h.shape}"
        )
    p = parity_permutation(n_sites)
    transformed = np.conj(h)[np.ix_(p, p)]
    tol = PT_CHECK_TOLERANCE * float(np.max(np.abs(h)))
    return bool(np.max(np.abs(transformed - h)) <= tol)


def is_exchange_symmetric(spec: LatticeSpec) -> bool:
    """True iff every bond and the gain matrix commute with the mode flip.

    This is the exact structural test ``z == 0`` everywhere: such
    matrices are simultaneously diagonalized by the symmetric and
    antisymmetric mode combinations. All-diagonal specs (``x == 0``
    everywhere) fail this test yet still split in the unmixed mode
    basis; ``decompose`` selects between the two cases.
    """
    return all(b.z == 0.0 for b in spec.profile.bonds) and spec.gain.z == 0.0
