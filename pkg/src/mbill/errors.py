"""Exception types shared across the package."""


class BilliardError(Exception):
    """Base class for all mbill errors."""


class ZeroVector(BilliardError):
    """Norm operation applied to the zero vector."""


class NotUnit(BilliardError):
    """Vector expected on the unit sphere of the norm is not."""


class NonConvexArc(BilliardError):
    """Arc fails strict convexity on its domain."""


class GeometryOverlap(BilliardError):
    """Boundary pieces intersect or the table is not simple."""


class QuadratureFailure(BilliardError):
    """Arclength quadrature did not reach the requested tolerance."""


class FlatPoint(BilliardError):
    """Curvature vanished or went negative where positive curvature is required."""


class OutOfChart(BilliardError):
    """Arclength parameter outside the piece chart."""


class NoRoot(BilliardError):
    """A bracketed root find had no sign change (inconsistent geometry)."""


class TangencyAtCorner(BilliardError):
    """Reflection requested at a non-smooth boundary point."""


class CornerHit(BilliardError):
    """Orbit hit within tolerance of a piece junction. Terminal event."""


class TangentialHit(BilliardError):
    """Orbit met the boundary tangentially. Terminal event."""


class CoincidentPoints(BilliardError):
    """Chord endpoints coincide."""


class OutOfRange(BilliardError):
    """Momentum u at or beyond the grazing limits."""


class DegenerateDenominator(BilliardError):
    """Tangent-map denominator too close to zero."""


class GrazingAngle(BilliardError):
    """sin(theta) vanished in the Euclidean tangent map."""


class SingularImplicit(BilliardError):
    """Implicit jet solve has a singular linearization."""


class SecondOrderNonzero(BilliardError):
    """Vertex map jet has nonvanishing quadratic terms (geometry/sign bug)."""


class NotElliptic(BilliardError):
    """Twist extraction requires an elliptic linear part."""


class ResonantOrbit(BilliardError):
    """Low-order resonance: the cubic normal form does not define tau1."""


class ScaleDegenerate(BilliardError):
    """Rotation rescaling undefined: off-diagonal product has wrong sign."""


class ResonantOrParabolic(BilliardError):
    """Closed-form twist denominator vanished."""


class ConfigError(BilliardError):
    """Invalid run configuration; message names the offending field."""
