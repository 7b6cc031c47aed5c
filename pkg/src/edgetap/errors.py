"""Exception types raised across the package."""


class EdgeTapError(Exception):
    """Base class for all package-specific errors."""


class InvalidShapeError(EdgeTapError, ValueError):
    """Skew-normal shape parameters violate their constraints (omega <= 0, non-finite)."""


class InvalidMomentsError(EdgeTapError, ValueError):
    """Tap moments violate their constraints (sigma <= 0, non-finite)."""


class IntervalBoundsError(EdgeTapError, ValueError):
    """Interval bounds are reversed (x1 > x2)."""


class DegenerateSampleError(EdgeTapError, ValueError):
    """Sample is unusable for likelihood fitting (too few points or zero variance)."""


class InvalidConditionError(EdgeTapError, ValueError):
    """Target condition violates its constraints (size <= 0 or margin < 0)."""


class InvalidCoefficientsError(EdgeTapError, ValueError):
    """Model coefficients violate sign constraints (c <= 0 or d >= 0)."""


class NonpositiveVarianceError(EdgeTapError, ValueError):
    """Predicted variance is not positive under the given coefficients."""


class SchemaError(EdgeTapError, ValueError):
    """Tap-log input does not match the expected CSV schema."""


class UnitMismatchError(SchemaError):
    """Pixel and millimeter columns disagree beyond tolerance."""


class InsufficientDataError(EdgeTapError, ValueError):
    """Too few kept taps in a participant-condition group."""


class FitError(EdgeTapError, ValueError):
    """Generic regression failure (preconditions unmet)."""


class RankDeficiencyError(FitError):
    """Design matrix is rank deficient (e.g. all target sizes equal)."""


class NoValidHingeError(FitError):
    """No hinge breakpoint candidate satisfies the sign constraints."""


class RegimeCoverageError(FitError):
    """One side of the threshold has too few conditions to fit."""


class DegenerateQuadraticError(FitError):
    """Quadratic term vanishes; the vertex is undefined."""


class InadmissibleTruthError(EdgeTapError, ValueError):
    """Generator truth coefficients are invalid over the design envelope."""


class PresetError(EdgeTapError, ValueError):
    """Coefficient preset could not be resolved or parsed."""
