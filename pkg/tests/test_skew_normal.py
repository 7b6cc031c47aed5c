"""Skew-normal layer: density, CDF, conversions, sampling, MLE."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from edgetap.errors import (
    DegenerateSampleError,
    IntervalBoundsError,
    InvalidMomentsError,
    InvalidShapeError,
)
from edgetap.skew_normal import (
    DELTA_CAP,
    SkewNormalShape,
    TapMoments,
    cdf,
    fit_mle,
    interval_probability,
    likelihood_ratio_statistic,
    moments_to_shape,
    normal_mle_log_likelihood,
    pdf,
    sample,
    shape_to_moments,
)

SHAPE_GRID = [
    SkewNormalShape(xi=0.0, omega=1.0, alpha=0.0),
    SkewNormalShape(xi=0.0, omega=1.0, alpha=3.0),
    SkewNormalShape(xi=-1.2, omega=0.6, alpha=-5.0),
    SkewNormalShape(xi=2.0, omega=2.5, alpha=0.7),
    SkewNormalShape(xi=-0.1285, omega=0.8505, alpha=10.25),
]


def test_shape_validation():
    with pytest.raises(InvalidShapeError):
        SkewNormalShape(xi=0.0, omega=0.0, alpha=1.0)
    with pytest.raises(InvalidShapeError):
        SkewNormalShape(xi=0.0, omega=-1.0, alpha=1.0)
    with pytest.raises(InvalidShapeError):
        SkewNormalShape(xi=math.nan, omega=1.0, alpha=1.0)


def test_moments_validation():
    with pytest.raises(InvalidMomentsError):
        TapMoments(mu=0.0, sigma=0.0, gamma1=0.0)
    with pytest.raises(InvalidMomentsError):
        TapMoments(mu=0.0, sigma=1.0, gamma1=math.inf)


@pytest.mark.parametrize("shape", SHAPE_GRID)
def test_pdf_integrates_to_one(shape):
    total, err = quad(pdf, shape.xi - 12 * shape.omega, shape.xi + 12 * shape.omega, args=(shape,))
    assert err < 1e-9
    assert total == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("shape", SHAPE_GRID)
def test_cdf_matches_quadrature(shape):
    for x in (-2.5, -0.5, 0.0, 0.8, 3.0):
        xq = shape.xi + x * shape.omega
        oracle = quad(pdf, shape.xi - 12 * shape.omega, xq, args=(shape,))[0]
        assert cdf(xq, shape) == pytest.approx(oracle, abs=1e-9)


def test_cdf_alpha_zero_is_normal():
    shape = SkewNormalShape(xi=0.5, omega=2.0, alpha=0.0)
    from edgetap.special_functions import normal_cdf

    for x in (-3.0, 0.5, 4.0):
        assert cdf(x, shape) == pytest.approx(normal_cdf((x - 0.5) / 2.0), abs=1e-15)


def test_cdf_monotone_and_bounded():
    shape = SHAPE_GRID[4]
    xs = np.linspace(shape.xi - 10 * shape.omega, shape.xi + 10 * shape.omega, 401)
    vals = [cdf(float(x), shape) for x in xs]
    assert all(0.0 <= v <= 1.0 for v in vals)
    # allow 1e-12 slack for cancellation noise deep in the tails
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_interval_probability_bounds_check():
    shape = SHAPE_GRID[1]
    with pytest.raises(IntervalBoundsError):
        interval_probability(1.0, -1.0, shape)
    assert interval_probability(0.3, 0.3, shape) == 0.0


def test_interval_probability_additive():
    shape = SHAPE_GRID[2]
    whole = interval_probability(-3.0, 2.0, shape)
    parts = interval_probability(-3.0, 0.0, shape) + interval_probability(0.0, 2.0, shape)
    assert whole == pytest.approx(parts, abs=1e-12)


def test_moments_to_shape_zero_skew_exact():
    shape = moments_to_shape(TapMoments(mu=1.5, sigma=0.7, gamma1=0.0))
    assert (shape.xi, shape.omega, shape.alpha) == (1.5, 0.7, 0.0)


def test_moments_to_shape_worked_example():
    # mu=0.54687, sigma=0.51690, gamma1=0.9574 from the near-edge scenario
    shape = moments_to_shape(TapMoments(mu=0.54687, sigma=0.51690, gamma1=0.9574))
    assert shape.xi == pytest.approx(-0.12852, abs=5e-4)
    assert shape.omega == pytest.approx(0.85049, abs=5e-4)
    assert shape.alpha == pytest.approx(10.2486, abs=5e-2)


def test_moments_to_shape_caps_extreme_skew():
    shape = moments_to_shape(TapMoments(mu=0.0, sigma=1.0, gamma1=5.0))
    assert abs(shape.delta) <= DELTA_CAP + 1e-15
    assert shape.alpha == pytest.approx(DELTA_CAP / math.sqrt(1 - DELTA_CAP**2), rel=1e-9)
    neg = moments_to_shape(TapMoments(mu=0.0, sigma=1.0, gamma1=-5.0))
    assert neg.alpha == pytest.approx(-shape.alpha, rel=1e-12)


def test_shape_to_moments_quadrature_oracle():
    shape = SkewNormalShape(xi=0.4, omega=1.3, alpha=2.0)
    m = shape_to_moments(shape)
    lo, hi = shape.xi - 14 * shape.omega, shape.xi + 14 * shape.omega
    mean = quad(lambda x: x * pdf(x, shape), lo, hi)[0]
    var = quad(lambda x: (x - mean) ** 2 * pdf(x, shape), lo, hi)[0]
    third = quad(lambda x: (x - mean) ** 3 * pdf(x, shape), lo, hi)[0]
    assert m.mu == pytest.approx(mean, abs=1e-9)
    assert m.sigma == pytest.approx(math.sqrt(var), abs=1e-9)
    assert m.gamma1 == pytest.approx(third / var**1.5, abs=1e-8)


@settings(max_examples=100, deadline=None)
@given(
    mu=st.floats(-5, 5),
    sigma=st.floats(0.05, 5),
    gamma1=st.floats(-0.93, 0.93),
)
def test_moment_round_trip(mu, sigma, gamma1):
    # gamma1 range stays inside the attainable-skewness bound so the cap
    # never engages and the conversion is exactly invertible.
    back = shape_to_moments(moments_to_shape(TapMoments(mu=mu, sigma=sigma, gamma1=gamma1)))
    assert back.mu == pytest.approx(mu, abs=1e-9)
    assert back.sigma == pytest.approx(sigma, rel=1e-9)
    assert back.gamma1 == pytest.approx(gamma1, abs=1e-9)


def test_sample_deterministic_and_matches_moments():
    shape = SkewNormalShape(xi=-0.5, omega=1.2, alpha=4.0)
    x1 = sample(shape, 200_000, seed=42)
    x2 = sample(shape, 200_000, seed=42)
    assert np.array_equal(x1, x2)
    m = shape_to_moments(shape)
    assert float(np.mean(x1)) == pytest.approx(m.mu, abs=4 * m.sigma / math.sqrt(x1.size))
    assert float(np.std(x1, ddof=1)) == pytest.approx(m.sigma, rel=0.01)


def test_sample_distribution_matches_cdf():
    shape = SkewNormalShape(xi=0.0, omega=1.0, alpha=-3.0)
    x = sample(shape, 100_000, seed=7)
    for q in (-1.5, -0.5, 0.0, 0.5):
        empirical = float(np.mean(x <= q))
        se = math.sqrt(cdf(q, shape) * (1 - cdf(q, shape)) / x.size)
        assert empirical == pytest.approx(cdf(q, shape), abs=5 * se + 1e-6)


def test_sample_rejects_bad_n():
    with pytest.raises(ValueError):
        sample(SHAPE_GRID[0], 0, seed=1)


def test_fit_mle_recovers_shape():
    truth = SkewNormalShape(xi=1.0, omega=0.8, alpha=3.0)
    x = sample(truth, 50_000, seed=11)
    est, ll = fit_mle(x)
    assert est.xi == pytest.approx(truth.xi, abs=0.05)
    assert est.omega == pytest.approx(truth.omega, abs=0.05)
    assert est.alpha == pytest.approx(truth.alpha, abs=0.5)
    assert math.isfinite(ll)


def test_fit_mle_never_below_initializer():
    x = sample(SkewNormalShape(xi=0.0, omega=1.0, alpha=2.0), 500, seed=3)
    from edgetap.skew_normal import _log_likelihood, _sample_moments

    init = moments_to_shape(_sample_moments(x))
    _, ll = fit_mle(x)
    assert ll >= _log_likelihood(init.xi, init.omega, init.alpha, x) - 1e-9


def test_fit_mle_rejects_degenerate_input():
    with pytest.raises(DegenerateSampleError):
        fit_mle([1.0, 2.0, 3.0])
    with pytest.raises(DegenerateSampleError):
        fit_mle([2.0] * 20)


def test_normal_mle_log_likelihood_closed_form():
    x = np.array([0.3, -1.2, 0.8, 2.0, -0.5, 0.0, 1.1, -0.9])
    var = float(np.var(x))
    expected = sum(
        -0.5 * math.log(2 * math.pi * var) - (xi - float(np.mean(x))) ** 2 / (2 * var) for xi in x
    )
    assert normal_mle_log_likelihood(x) == pytest.approx(expected, abs=1e-10)


def test_likelihood_ratio_small_for_normal_data():
    rng = np.random.Generator(np.random.PCG64(1))
    x = rng.standard_normal(5000)
    assert 0.0 <= likelihood_ratio_statistic(x) < 6.0


def test_likelihood_ratio_large_for_skewed_data():
    x = sample(SkewNormalShape(xi=0.0, omega=1.0, alpha=8.0), 5000, seed=2)
    assert likelihood_ratio_statistic(x) > 50.0
