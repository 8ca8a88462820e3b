"""Exception types shared across the package."""


class G2Error(Exception):
    """Base class for package-specific errors."""


class BadReduction(G2Error):
    """The curve has bad reduction at the requested prime."""


class NonIntegralPart(G2Error):
    """A reduction-type valuation formula produced a non-integer."""


class NonIntegralModel(G2Error):
    """A local computation requires a model integral at the place."""


class AmbiguousDivision(G2Error):
    """Pseudo-addition could not divide out a common factor uniquely."""


class UnsupportedDivisor(G2Error):
    """The divisor class leaves the supported Mumford chart."""


class UnsupportedTransformation(G2Error):
    """The requested coordinate change is outside the supported family."""


class NotOnKummer(G2Error):
    """The given coordinates do not satisfy the Kummer quartic."""


class UnsupportedReduction(G2Error):
    """The special-fiber analysis does not cover this configuration."""


class RootIsolationFailure(G2Error):
    """Numerical root finding did not reach the required accuracy."""


class NoConvergence(G2Error):
    """An escalating-precision computation hit its ceiling before converging."""


class PrecisionExhausted(G2Error):
    """Internal precision budget exceeded (indicates a bug)."""


class FactorizationTimeout(G2Error):
    """Integer factorization exceeded its budget."""
