"""Exception types shared across the toolkit."""


class Ell2KitError(Exception):
    """Base class for all toolkit errors."""


class TailNotCertified(Ell2KitError):
    """A tail sum could not be certified as convergent or divergent."""


class TailDivergent(Ell2KitError):
    """A tail sum required to be finite is provably divergent."""


class ZeroCoordinate(Ell2KitError):
    """A coordinate that must be nonzero is zero."""


class NotNearInfinity(Ell2KitError):
    """The coordinate-reciprocal gauge diverges."""


class NonFiniteSample(Ell2KitError):
    """A Monte Carlo integrand returned NaN or infinity."""


class MalformedBlock(Ell2KitError):
    """A finite-perturbation map violates its identity-off-block contract."""


class LocalFinitenessViolated(Ell2KitError):
    """The area-density times Gaussian-weight product is unbounded on the chart."""


class ChartMismatch(Ell2KitError):
    """A region is not contained in both charts being compared."""


class UnsupportedCodimension(Ell2KitError):
    """Surface co-dimension exceeds the configured desk-scale limit."""


class NotClosed(Ell2KitError):
    """The right-hand side form is not annihilated by the degree-raising operator."""


class BasisTooSmall(Ell2KitError):
    """The truncated basis cannot represent a solution within tolerance."""


class RatioTestInconclusive(Ell2KitError):
    """Majorant coefficient ratios did not settle; no radius is reported."""


class ConditionViolated(Ell2KitError):
    """Supplied chart bounds fail on sampled chart points."""


class ConfigError(Ell2KitError):
    """A run configuration is invalid."""
