"""Edge-distance predictive layer against frozen worked examples."""

import math

import pytest

from edgetap.edge_model import (
    EdgeModelCoefficients,
    EdgeSide,
    GaussianCoefficients,
    TargetCondition,
    gaussian_sigma,
    gaussian_sr,
    predict_gamma1,
    predict_mu,
    predict_sigma,
    predict_sr,
    predict_sr_2d,
    threshold,
)
from edgetap.errors import (
    InvalidCoefficientsError,
    InvalidConditionError,
    NonpositiveVarianceError,
)
from edgetap.presets import load_preset
from edgetap.simulator import monte_carlo_sr

LEFT = load_preset("pixel6a-left-index")
BOTTOM = load_preset("pixel6a-bottom-index")


def cond(size, margin, side=EdgeSide.NEGATIVE):
    return TargetCondition(size_mm=size, margin_mm=margin, edge_side=side)


def test_condition_validation():
    with pytest.raises(InvalidConditionError):
        TargetCondition(size_mm=0.0, margin_mm=1.0)
    with pytest.raises(InvalidConditionError):
        TargetCondition(size_mm=1.0, margin_mm=-0.1)


def test_coefficient_hinge_admissibility():
    with pytest.raises(InvalidCoefficientsError):
        EdgeModelCoefficients(c=-1.0, d=-0.1, e=1, f=0, g=0, h=1, i=0, j=0, k=0, l=0)
    with pytest.raises(InvalidCoefficientsError):
        EdgeModelCoefficients(c=1.0, d=0.1, e=1, f=0, g=0, h=1, i=0, j=0, k=0, l=0)


def test_edge_distance():
    assert cond(1.560, 0.0).d_edge_mm == pytest.approx(0.78, abs=1e-9)
    assert cond(4.679, 3.119).d_edge_mm == pytest.approx(5.4585, abs=1e-9)


def test_thresholds_both_presets():
    assert threshold(LEFT.coefficients) == pytest.approx(6.4118, abs=1e-3)
    assert threshold(BOTTOM.coefficients) == pytest.approx(6.0302, abs=1e-3)


def test_gamma1_worked_example():
    # smallest target flush against the edge
    assert predict_gamma1(cond(1.560, 0.0), LEFT.coefficients) == pytest.approx(0.9574, abs=5e-4)
    # far from the edge the hinge clamps to zero
    assert predict_gamma1(cond(4.679, 18.715), LEFT.coefficients) == 0.0


def test_gamma1_mirrors_for_positive_side_edges():
    g = predict_gamma1(cond(1.560, 0.0, EdgeSide.POSITIVE), BOTTOM.coefficients)
    assert g == pytest.approx(-1.0448, abs=5e-4)


def test_sigma_worked_examples():
    assert predict_sigma(cond(1.560, 0.0), LEFT.coefficients) == pytest.approx(0.51690, abs=5e-4)
    # far regime on the second preset: sqrt(1.31 + 0.0130 * 7.798^2)
    assert predict_sigma(cond(7.798, 18.715), BOTTOM.coefficients) == pytest.approx(1.44932, abs=5e-4)


def test_gaussian_sigma_second_preset():
    # sqrt(1.23 + 0.0164 * 7.798^2); arithmetic gives 1.49240
    assert gaussian_sigma(cond(7.798, 0.0), BOTTOM.gaussian) == pytest.approx(1.49240, abs=5e-4)


def test_sigma_nonpositive_variance_rejected():
    bad = EdgeModelCoefficients(c=1.0, d=-0.2, e=-5.0, f=0.0, g=0.0, h=1.0, i=0.0, j=0, k=0, l=0)
    with pytest.raises(NonpositiveVarianceError):
        predict_sigma(cond(1.0, 0.0), bad)


def test_mu_worked_example_and_far_zero():
    assert predict_mu(cond(1.560, 0.0), LEFT.coefficients) == pytest.approx(0.54687, abs=5e-4)
    assert predict_mu(cond(4.679, 18.715), LEFT.coefficients) == 0.0
    # raw-frame value for the bottom edge at the same distance
    assert predict_mu(cond(1.560, 0.0, EdgeSide.POSITIVE), BOTTOM.coefficients) == pytest.approx(
        0.0398, abs=2e-3
    )


def test_predict_sr_worked_example():
    pred = predict_sr(cond(1.560, 0.0), LEFT.coefficients)
    assert pred.regime == "skewed"
    assert pred.shape.xi == pytest.approx(-0.12852, abs=5e-4)
    assert pred.shape.omega == pytest.approx(0.85049, abs=5e-4)
    assert pred.shape.alpha == pytest.approx(10.2486, abs=5e-2)
    assert pred.sr == pytest.approx(0.714581, abs=5e-4)


def test_predict_sr_monte_carlo_oracle():
    pred = predict_sr(cond(1.560, 0.0), LEFT.coefficients)
    p, se = monte_carlo_sr(pred.shape, 1.560, n=1_000_000, seed=101)
    assert abs(pred.sr - p) <= 4 * se


def test_regime_label_consistent_with_threshold():
    for size in (1.560, 4.679):
        for margin in (0.0, 3.119, 9.358, 18.715):
            c = cond(size, margin)
            pred = predict_sr(c, LEFT.coefficients)
            expected = "gaussian" if c.d_edge_mm >= threshold(LEFT.coefficients) else "skewed"
            assert pred.regime == expected
            if pred.regime == "gaussian":
                assert pred.gamma1 == 0.0
                assert pred.mu_mm == 0.0


def test_sr_invariant_under_edge_mirror():
    near = TargetCondition(size_mm=2.339, margin_mm=1.560, edge_side=EdgeSide.NEGATIVE)
    flipped = TargetCondition(size_mm=2.339, margin_mm=1.560, edge_side=EdgeSide.POSITIVE)
    p1 = predict_sr(near, LEFT.coefficients)
    p2 = predict_sr(flipped, LEFT.coefficients)
    assert p2.sr == pytest.approx(p1.sr, abs=1e-12)
    assert p2.gamma1 == pytest.approx(-p1.gamma1, abs=1e-12)
    assert p2.mu_mm == pytest.approx(-p1.mu_mm, abs=1e-12)
    assert p2.sigma_mm == p1.sigma_mm


def test_gaussian_sigma_and_sr_worked_examples():
    g = LEFT.gaussian
    assert gaussian_sigma(cond(4.679, 0.0), g) == pytest.approx(
        math.sqrt(1.50 + 0.0236 * 4.679**2), abs=1e-9
    )
    assert gaussian_sr(cond(4.679, 0.0), g) == pytest.approx(0.900529, abs=5e-4)
    # baseline ignores the margin entirely
    assert gaussian_sr(cond(4.679, 9.0), g) == gaussian_sr(cond(4.679, 0.0), g)


def test_gaussian_nonpositive_variance_rejected():
    with pytest.raises(NonpositiveVarianceError):
        gaussian_sigma(cond(1.0, 0.0), GaussianCoefficients(a=-2.0, b=0.0))


def test_predict_sr_2d_product():
    cx = cond(4.679, 1.560)
    cy = TargetCondition(size_mm=3.119, margin_mm=0.0, edge_side=EdgeSide.POSITIVE)
    combined = predict_sr_2d(cx, cy, LEFT.coefficients, BOTTOM.coefficients)
    assert combined == pytest.approx(
        predict_sr(cx, LEFT.coefficients).sr * predict_sr(cy, BOTTOM.coefficients).sr, abs=1e-15
    )
    assert 0.0 <= combined <= 1.0
