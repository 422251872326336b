"""
Exception hierarchy for the cavity-array transport simulator.
"""


class CavityTransportError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(CavityTransportError):
    """Invalid run configuration. ``field`` names the offending dotted key."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field


class InvalidParameterError(ConfigurationError, ValueError):
    """Model parameters violate a construction invariant."""


class DomainError(CavityTransportError):
    """A physically meaningful singular or out-of-range input."""


class AtomPoleError(DomainError):
    """Energy coincides with an atomic level, the renormalized energy diverges."""


class LeadBandEdgeError(DomainError):
    """No propagating incident photon exists at this energy (|E - omega| >= 2v)."""


class SingularSystemError(DomainError):
    """A brute-force linear system is numerically singular."""


class NoGapError(DomainError):
    """No |x| = 1 crossing could be bracketed."""


class FeatureAbsentError(DomainError):
    """The requested spectral feature has no extremum/half-maximum structure."""


class NotEvanescentError(DomainError):
    """A probe energy expected inside the gap is not evanescent."""
