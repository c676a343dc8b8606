"""Exception taxonomy shared by all striplab modules."""


class StripLabError(Exception):
    """Base class for all striplab errors."""


class ParamDomain(StripLabError):
    """A parameter violates the model's strict-inequality domain."""


class InadmissibleMove(StripLabError):
    """A local move was requested where the path does not match its pre-shape."""


class ShockRegion(StripLabError):
    """Operation requires the fan region (c1*c2 < 1 resp. u+v > 0)."""


class TruncationTooSmall(StripLabError):
    """A truncated sum's certified tail bound exceeds the requested tolerance."""


class QuadratureFailure(StripLabError):
    """Numerical integration could not certify the requested tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateWeights(StripLabError):
    """Importance weights collapsed below the configured ESS floor."""


class EmptySample(StripLabError):
    """A statistic was requested on an empty sample."""


class AllZeroWeights(StripLabError):
    """All importance weights are zero."""
