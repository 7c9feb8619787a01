"""Exception types shared across the package."""


class PtLatticeError(Exception):
    """Base class for all package errors."""


class SpecValidationError(PtLatticeError, ValueError):
    """A domain object or argument violates its declared invariants."""


class NonParitySymmetricError(SpecValidationError):
    """Bond list is not mirror symmetric about the chain centre."""


class BadLengthError(SpecValidationError):
    """Bond list length does not match the site count and boundary."""


class NegativeAmplitudeError(SpecValidationError):
    """A tunneling amplitude that must be nonnegative is negative."""


class AmplitudeBoundError(SpecValidationError):
    """Mode-flip amplitude exceeds the mode-preserving amplitude."""


class CenterImpurityError(SpecValidationError):
    """Impurity placed on the self-mirror centre site of an odd chain."""


class DimensionMismatchError(SpecValidationError):
    """Matrix or vector dimensions are inconsistent with each other."""


class ZeroVectorError(SpecValidationError):
    """A vector argument that must be nonzero has zero norm."""


class NotDecomposableError(PtLatticeError):
    """Bond and gain matrices share no common diagonalizing basis."""


class NoConvergenceError(PtLatticeError):
    """The eigenvalue iteration failed to converge."""


class OutOfRegimeError(PtLatticeError):
    """A closed-form expression was evaluated outside its validity regime."""


class ConfigError(PtLatticeError):
    """Base class for configuration handling errors."""


class ConfigParseError(ConfigError):
    """Configuration document is not well formed."""


class ConfigValidationError(ConfigError):
    """Configuration document is well formed but describes no valid job."""
