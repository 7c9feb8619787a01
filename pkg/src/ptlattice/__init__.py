"""Balanced gain/loss tight-binding chains with a two-state pseudospin.

The package builds dense single-particle matrices for N-site chains
whose sites carry two internal modes, classifies their spectra as real
or complex, reduces mode-symmetric lattices to two uncoupled scalar
chains, and locates the gain strength at which the spectrum first turns
complex, for single lattices and for sweeps over the impurity position.
"""

from ._version import __version__
from .config import (
    COMMANDS,
    JobConfig,
    OVERRIDABLE_KEYS,
    PROFILES,
    RAY_ALIASES,
    apply_overrides,
    build_config,
    config_to_dict,
    dump_config,
    load_document,
    parse_config,
)
from .core import (
    BOUNDARIES,
    LatticeSpec,
    PROFILE_KINDS,
    SpinMatrix,
    TunnelingProfile,
    assemble_hamiltonian,
    build_profile,
    check_pt_symmetry,
    constant_profile,
    explicit_profile,
    is_exchange_symmetric,
    parabolic_sqrt_profile,
    parity_permutation,
    validate_impurity_site,
)
from .errors import (
    AmplitudeBoundError,
    BadLengthError,
    CenterImpurityError,
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    DimensionMismatchError,
    NegativeAmplitudeError,
    NoConvergenceError,
    NonParitySymmetricError,
    NotDecomposableError,
    OutOfRegimeError,
    PtLatticeError,
    SpecValidationError,
    ZeroVectorError,
)
from .runner import (
    CSV_HEADER,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    WORKERS_ENV_VAR,
    profile_from_config,
    ray_from_config,
    ring_from_config,
    run_command,
)
from .sectors import (
    Decomposition,
    DirectSumReport,
    IDENTITY_BASIS,
    SYM_ANTISYM,
    ScalarLatticeSpec,
    assemble_scalar_hamiltonian,
    decompose,
    decomposition_basis,
    verify_direct_sum,
)
from .spectral import (
    DIMENSION_CAP,
    Spectrum,
    classify_spectrum,
    eigenpairs,
    eigenvalues,
    multiset_distance,
    residual_check,
)
from .thresholds import (
    ALWAYS_BROKEN,
    CONVERGED,
    CONVERGED_REENTRANT,
    GainRay,
    IDENTITY_RAY,
    NO_UPPER_BRACKET,
    PhaseDiagram,
    PhaseRow,
    RAY_NAMES,
    RingSpec,
    TAU_X,
    TAU_Z,
    ThresholdResult,
    find_threshold,
    gain_ray_family,
    phase_diagram,
    ring_threshold_bisection,
    ring_threshold_formula,
    sector_threshold_min,
    threshold_along_ray,
)

__all__ = [name for name in dir() if not name.startswith("_")]
