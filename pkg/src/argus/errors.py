"""Exception hierarchy shared by every numerical routine in the package."""

from __future__ import annotations


class ArgusError(Exception):
    """Base class for all numerical-engine failures."""


# contour integration
class OriginTooClose(ArgusError):
    """The curve passes too close to the origin for its index to be defined."""


class RefinementExhausted(ArgusError):
    """Adaptive refinement hit its depth or size cap before meeting tolerance."""


class ZeroOnPath(ArgusError):
    """The function vanishes on (or numerically on) the integration path."""

    def __init__(self, message: str, radius: float | None = None):
        super().__init__(message)
        self.radius = radius


class QuadratureMismatch(ArgusError):
    """Phase unwrapping and f'/f quadrature disagree beyond tolerance."""


class NonIntegerResult(ArgusError):
    """A closed-path index is not within tolerance of an integer."""


class UnsupportedRegion(ArgusError):
    """No bound or margin is defined for the requested region kind."""


# index profile
class ZeroOffRadius(ArgusError):
    """A declared zero lies near, but not on, the radius being probed."""


class ZeroNearRadius(ArgusError):
    """A zero lies inside the annulus used for radial differentiation."""


class ExtrapolationDiverged(ArgusError):
    """One-sided limit estimates did not behave convergently."""


class GridTooCoarse(ArgusError):
    """The profile grid cannot resolve the requested integral."""


# blaschke
class PoleAtZ(ArgusError):
    """A Blaschke factor was evaluated at its pole."""


class PoleInput(ArgusError):
    """A Cayley transform was evaluated at its pole."""


class BoundViolated(ArgusError):
    """A proven pointwise bound failed numerically (implementation bug)."""


class TailNotCertified(ArgusError):
    """The truncation error of an infinite product cannot be bounded below eps."""


class OriginInput(ArgusError):
    """The origin was passed where it is excluded."""


# boundary analysis
class UnderflowDominated(ArgusError):
    """|f| underflowed before the local order stabilised."""

    def __init__(self, message: str, deepest_scale: float | None = None):
        super().__init__(message)
        self.deepest_scale = deepest_scale


class GVanishes(ArgusError):
    """The comparison function vanishes on the approach path."""


# cusp
class AlphaNonpositive(ArgusError):
    """The cusp profile is not positive on the integration interval."""


class QuadratureFailed(ArgusError):
    """The envelope integral did not converge to the requested accuracy."""


class LeadingCoefficientZero(ArgusError):
    """The leading power-series coefficient of a cusp profile is zero."""


# factory
class DegenerateSpec(ArgusError):
    """A zero plan repeats a location across records."""


class BudgetExhausted(ArgusError):
    """A parameter search ran out of trials."""
