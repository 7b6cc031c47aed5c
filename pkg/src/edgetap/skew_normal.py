"""Skew-normal distribution layer.

Density, CDF, interval probability, sampling, conversion between
(mean, SD, skewness) moments and (location, scale, shape) parameters,
maximum-likelihood fitting, and the normal-vs-skew-normal likelihood-ratio
statistic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import log_ndtr

from .errors import (
    DegenerateSampleError,
    IntervalBoundsError,
    InvalidMomentsError,
    InvalidShapeError,
)
from .special_functions import normal_cdf, normal_pdf, owens_t

# |delta| cap keeping alpha finite; implies |gamma1| < ~0.9953, the
# attainable-skewness bound of the family.
DELTA_CAP = 0.999

_B = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class SkewNormalShape:
    """Location xi (mm), scale omega (mm, > 0), shape alpha (dimensionless)."""

    xi: float
    omega: float
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.xi) and math.isfinite(self.omega) and math.isfinite(self.alpha)):
            raise InvalidShapeError(f"shape parameters must be finite, got {self}")
        if self.omega <= 0.0:
            raise InvalidShapeError(f"omega must be positive, got {self.omega}")

    @property
    def delta(self) -> float:
        return self.alpha / math.sqrt(1.0 + self.alpha * self.alpha)


@dataclass(frozen=True)
class TapMoments:
    """Mean mu (mm, relative to target center), SD sigma (mm, > 0), skewness gamma1."""

    mu: float
    sigma: float
    gamma1: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma) and math.isfinite(self.gamma1)):
            raise InvalidMomentsError(f"moments must be finite, got {self}")
        if self.sigma <= 0.0:
            raise InvalidMomentsError(f"sigma must be positive, got {self.sigma}")


def pdf(x: float, shape: SkewNormalShape) -> float:
    """Skew-normal density at x (per mm)."""
    z = (x - shape.xi) / shape.omega
    return 2.0 / shape.omega * normal_pdf(z) * normal_cdf(shape.alpha * z)


def cdf(x: float, shape: SkewNormalShape) -> float:
    """Skew-normal CDF at x."""
    z = (x - shape.xi) / shape.omega
    p = normal_cdf(z) - 2.0 * owens_t(z, shape.alpha)
    return min(1.0, max(0.0, p))


def interval_probability(x1: float, x2: float, shape: SkewNormalShape) -> float:
    """Probability mass on [x1, x2]."""
    if x1 > x2:
        raise IntervalBoundsError(f"x1 must not exceed x2, got {x1} > {x2}")
    p = cdf(x2, shape) - cdf(x1, shape)
    return min(1.0, max(0.0, p))


def moments_to_shape(m: TapMoments) -> SkewNormalShape:
    """Convert moments to shape parameters, capping |delta| at DELTA_CAP.

    For gamma1 = 0 this returns {xi=mu, omega=sigma, alpha=0} exactly.
    """
    g = abs(m.gamma1)
    if g == 0.0:
        return SkewNormalShape(xi=m.mu, omega=m.sigma, alpha=0.0)
    g23 = g ** (2.0 / 3.0)
    delta = math.sqrt((math.pi / 2.0) * g23 / (g23 + ((4.0 - math.pi) / 2.0) ** (2.0 / 3.0)))
    delta = math.copysign(min(DELTA_CAP, delta), m.gamma1)
    alpha = delta / math.sqrt(1.0 - delta * delta)
    omega = m.sigma / math.sqrt(1.0 - 2.0 * delta * delta / math.pi)
    xi = m.mu - omega * delta * _B
    return SkewNormalShape(xi=xi, omega=omega, alpha=alpha)


def shape_to_moments(shape: SkewNormalShape) -> TapMoments:
    """Analytic mean, SD, and skewness of a skew-normal shape."""
    delta = shape.delta
    mu_z = _B * delta
    var_z = 1.0 - mu_z * mu_z
    mean = shape.xi + shape.omega * mu_z
    sigma = shape.omega * math.sqrt(var_z)
    gamma1 = (4.0 - math.pi) / 2.0 * mu_z**3 / var_z**1.5
    return TapMoments(mu=mean, sigma=sigma, gamma1=gamma1)


def sample(shape: SkewNormalShape, n: int, seed: int) -> np.ndarray:
    """Draw n values, deterministically for a fixed seed.

    Uses the representation X = xi + omega * (delta|U0| + sqrt(1-delta^2) U1)
    with U0, U1 independent standard normals from a PCG64 generator.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    u0 = rng.standard_normal(n)
    u1 = rng.standard_normal(n)
    delta = shape.delta
    return shape.xi + shape.omega * (delta * np.abs(u0) + math.sqrt(1.0 - delta * delta) * u1)


def _log_likelihood(xi: float, omega: float, alpha: float, x: np.ndarray) -> float:
    z = (x - xi) / omega
    return float(
        x.size * (math.log(2.0 / omega) - 0.5 * math.log(2.0 * math.pi))
        - 0.5 * np.sum(z * z)
        + np.sum(log_ndtr(alpha * z))
    )


def _sample_moments(x: np.ndarray) -> TapMoments:
    m = float(np.mean(x))
    sd = float(np.std(x))
    g1 = float(np.mean(((x - m) / sd) ** 3))
    return TapMoments(mu=m, sigma=sd, gamma1=g1)


def normal_mle_log_likelihood(samples: np.ndarray) -> float:
    """Closed-form maximized normal log-likelihood."""
    x = np.asarray(samples, dtype=float)
    var = float(np.var(x))
    return -0.5 * x.size * (math.log(2.0 * math.pi * var) + 1.0)


def _check_samples(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    if x.size < 8:
        raise DegenerateSampleError(f"need at least 8 samples, got {x.size}")
    if float(np.var(x)) <= 0.0:
        raise DegenerateSampleError("samples have zero variance")
    return x


def fit_mle(samples) -> tuple[SkewNormalShape, float]:
    """Maximum-likelihood shape estimate and its log-likelihood.

    Nelder-Mead over (xi, log omega, alpha), started at the method-of-moments
    estimate; the returned log-likelihood never falls below the initializer's.
    """
    x = _check_samples(samples)
    init = moments_to_shape(_sample_moments(x))

    def neg_ll(theta):
        return -_log_likelihood(theta[0], math.exp(theta[1]), theta[2], x)

    theta0 = np.array([init.xi, math.log(init.omega), init.alpha])
    res = minimize(
        neg_ll,
        theta0,
        method="Nelder-Mead",
        options={"xatol": 1e-7, "fatol": 1e-9, "maxiter": 4000, "maxfev": 4000},
    )
    best_theta = res.x if res.fun <= neg_ll(theta0) else theta0
    shape = SkewNormalShape(xi=float(best_theta[0]), omega=math.exp(float(best_theta[1])), alpha=float(best_theta[2]))
    return shape, _log_likelihood(shape.xi, shape.omega, shape.alpha, x)


def likelihood_ratio_statistic(samples) -> float:
    """2 * (skew-normal MLE log-likelihood - normal MLE log-likelihood), clamped at 0."""
    x = _check_samples(samples)
    _, ll_skew = fit_mle(x)
    return max(0.0, 2.0 * (ll_skew - normal_mle_log_likelihood(x)))
