"""Exception hierarchy for the spectral-gap toolkit.

Two broad families matter for callers (and for the CLI exit codes):
input/domain problems, where the request itself is malformed or outside
the mathematical domain of the operation, and numerical failures, where
a well-posed computation could not be completed to tolerance.
"""


class SpecgapError(Exception):
    """Base class for all toolkit errors."""


class InputError(SpecgapError):
    """A request is malformed or outside the operation's domain."""


class DomainError(InputError):
    """Parameter outside the mathematical domain (bad sign, bad interval, ...)."""


class InfeasibleDelta(InputError):
    """Perturbation size delta too large for the requested dimension."""


class TargetBelowMinimum(InputError):
    """Maximum-matching target below the attainable family minimum."""


class MeshTooCoarse(InputError):
    """Finite-difference mesh too coarse for a trustworthy eigenvalue."""


class SingularWeight(InputError):
    """Weight vanishes inside the requested finite-difference mesh."""


class ProfileFormatError(InputError):
    """Curvature profile file could not be parsed."""


class NumericalError(SpecgapError):
    """A well-posed computation failed to converge or to certify."""


class IntegrationFailure(NumericalError):
    """ODE integration broke down (step failure, overflow, NaN)."""


class HorizonReached(NumericalError):
    """Integration hit the horizon without an event or a certificate."""


class BracketFailure(NumericalError):
    """Root bracketing failed after the allowed number of expansions."""


class CertifiedInfinite(NumericalError):
    """The comparison solution provably never attains an interior maximum."""


class NonPositiveEigenfunction(NumericalError):
    """A principal eigenvector changed sign; cannot be used as a weight."""
