"""Exception hierarchy shared by all modules."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(ToolkitError):
    """Operands live on Hilbert spaces of different dimension."""


class NotHermitian(ToolkitError):
    """A Hermitian operator was required."""


class NonCommuting(ToolkitError):
    """The observable pair does not commute within tolerance."""


class NotInvolutory(ToolkitError):
    """An operator squaring to the identity was required."""


class NotIdempotent(ToolkitError):
    """A projector (idempotent operator) was required."""


class OrthogonalPostselection(ToolkitError):
    """Pre- and post-selected states are orthogonal; weak values undefined."""


class DegenerateNorm(ToolkitError):
    """The post-selected pointer norm vanished (destructive interference)."""


class UnsupportedMonomial(ToolkitError):
    """Requested pointer monomial is outside the supported table."""


class ClippingRisk(ToolkitError):
    """A grid shift is large enough to wrap around the periodic box."""


class NormalizationError(ToolkitError):
    """A state flagged or required as normalized is not."""


class ConfigError(ToolkitError):
    """Run configuration failed to parse or validate."""
