"""Predictive layer: target size and edge distance -> skewness, spread, mean
offset, skew-normal shape, and tap success rate.

Coefficient convention: the c..l constants are stored in an edge-relative
reference frame where positive coordinates point away from the edge. For
positive-side edges (right/bottom in screen coordinates) predictions are
mirrored back into the raw axis, so flipping the edge side negates the
predicted gamma1 and mu and leaves the success rate unchanged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import (
    InvalidCoefficientsError,
    InvalidConditionError,
    NonpositiveVarianceError,
)
from .skew_normal import SkewNormalShape, TapMoments, interval_probability, moments_to_shape
from .special_functions import erf

_SQRT_2 = math.sqrt(2.0)


class EdgeSide(str, enum.Enum):
    """Which side of the target center the screen edge sits on, in the raw axis."""

    NEGATIVE = "negative_side"  # edge below/left of the target center
    POSITIVE = "positive_side"  # edge above/right of the target center


@dataclass(frozen=True)
class TargetCondition:
    """One task condition: constrained target dimension and edge gap."""

    size_mm: float
    margin_mm: float
    edge_side: EdgeSide = EdgeSide.NEGATIVE
    axis_label: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.size_mm) and self.size_mm > 0.0):
            raise InvalidConditionError(f"size_mm must be positive, got {self.size_mm}")
        if not (math.isfinite(self.margin_mm) and self.margin_mm >= 0.0):
            raise InvalidConditionError(f"margin_mm must be >= 0, got {self.margin_mm}")

    @property
    def d_edge_mm(self) -> float:
        """Distance from the screen edge to the target center."""
        return self.margin_mm + self.size_mm / 2.0

    @property
    def side_sign(self) -> float:
        """+1 when the target center is on the positive side of the edge, else -1."""
        return 1.0 if self.edge_side is EdgeSide.NEGATIVE else -1.0


@dataclass(frozen=True)
class EdgeModelCoefficients:
    """Fitted constants of the skewed model for one edge/axis.

    c, d: skewness hinge. e, f, g: near-edge variance. h, i: far variance.
    j, k, l: near-edge mean-offset quadratic.
    """

    c: float
    d: float
    e: float
    f: float
    g: float
    h: float
    i: float
    j: float
    k: float
    l: float

    def __post_init__(self):
        if not (self.c > 0.0 and self.d < 0.0):
            raise InvalidCoefficientsError(f"need c > 0 and d < 0, got c={self.c}, d={self.d}")


@dataclass(frozen=True)
class GaussianCoefficients:
    """Dual Gaussian baseline: variance = a + b * size^2."""

    a: float
    b: float


@dataclass(frozen=True)
class SrPrediction:
    sr: float
    gamma1: float
    sigma_mm: float
    mu_mm: float
    shape: SkewNormalShape
    regime: str  # "skewed" or "gaussian"


def threshold(coeffs: EdgeModelCoefficients) -> float:
    """Smallest edge distance at which predicted skewness is zero (-c/d, mm)."""
    return -coeffs.c / coeffs.d


def predict_gamma1(cond: TargetCondition, coeffs: EdgeModelCoefficients) -> float:
    """Signed skewness of the tap distribution in the raw axis."""
    return cond.side_sign * max(0.0, coeffs.c + coeffs.d * cond.d_edge_mm)


def predict_sigma(cond: TargetCondition, coeffs: EdgeModelCoefficients) -> float:
    """Tap-coordinate SD (mm); piecewise in edge distance, discontinuity accepted."""
    if cond.d_edge_mm < threshold(coeffs):
        var = coeffs.e + coeffs.f * cond.size_mm**2 + coeffs.g * cond.margin_mm
    else:
        var = coeffs.h + coeffs.i * cond.size_mm**2
    if var <= 0.0:
        raise NonpositiveVarianceError(
            f"predicted variance {var} <= 0 for size={cond.size_mm}, margin={cond.margin_mm}"
        )
    return math.sqrt(var)


def predict_mu(cond: TargetCondition, coeffs: EdgeModelCoefficients) -> float:
    """Mean tap offset from the target center (mm) in the raw axis.

    Quadratic in edge distance near the edge, 0 otherwise; mirrored for
    positive-side edges.
    """
    d_edge = cond.d_edge_mm
    if d_edge >= threshold(coeffs):
        return 0.0
    return cond.side_sign * (coeffs.j + coeffs.k * (d_edge - coeffs.l) ** 2)


def predict_sr(cond: TargetCondition, coeffs: EdgeModelCoefficients) -> SrPrediction:
    """Full pipeline: predictors -> moments -> shape -> mass over the target."""
    gamma1 = predict_gamma1(cond, coeffs)
    sigma = predict_sigma(cond, coeffs)
    mu = predict_mu(cond, coeffs)
    shape = moments_to_shape(TapMoments(mu=mu, sigma=sigma, gamma1=gamma1))
    sr = interval_probability(-cond.size_mm / 2.0, cond.size_mm / 2.0, shape)
    regime = "gaussian" if cond.d_edge_mm >= threshold(coeffs) else "skewed"
    return SrPrediction(sr=sr, gamma1=gamma1, sigma_mm=sigma, mu_mm=mu, shape=shape, regime=regime)


def gaussian_sigma(cond: TargetCondition, g: GaussianCoefficients) -> float:
    """Dual Gaussian tap-coordinate SD (mm)."""
    var = g.a + g.b * cond.size_mm**2
    if var <= 0.0:
        raise NonpositiveVarianceError(f"predicted variance {var} <= 0 for size={cond.size_mm}")
    return math.sqrt(var)


def gaussian_sr(cond: TargetCondition, g: GaussianCoefficients) -> float:
    """Dual Gaussian success rate erf(S / (2 sqrt(2) sigma))."""
    sigma = gaussian_sigma(cond, g)
    return erf(cond.size_mm / (2.0 * _SQRT_2 * sigma))


def predict_sr_2d(
    cond_x: TargetCondition,
    cond_y: TargetCondition,
    coeffs_x: EdgeModelCoefficients,
    coeffs_y: EdgeModelCoefficients,
) -> float:
    """Experimental 2D extension: product of the two independent 1D rates."""
    return predict_sr(cond_x, coeffs_x).sr * predict_sr(cond_y, coeffs_y).sr
