"""Regression layer: estimate model coefficients from condition summaries and
compute accuracy metrics plus leave-one-out cross-validation over conditions.

All fits are deterministic least squares. Metrics are computed on the
quantity each regression targets (variance for the Gaussian baseline, SD for
the piecewise model, mean offset for the quadratic, success rate in percent).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .edge_model import EdgeModelCoefficients, GaussianCoefficients, gaussian_sr, predict_sr, threshold
from .errors import (
    DegenerateQuadraticError,
    FitError,
    NoValidHingeError,
    RankDeficiencyError,
    RegimeCoverageError,
)
from .experiment_data import ConditionSummary

_QUADRATIC_TOL = 1e-8


@dataclass
class FitReport:
    r2: float
    mae: float
    rmse: float
    mape: float  # percent; rows with observed 0 excluded and counted
    loocv_r2: float | None = None
    loocv_mae: float | None = None
    per_condition_residuals: list[float] = field(default_factory=list)
    n_mape_excluded: int = 0
    flags: list[str] = field(default_factory=list)


def _report(observed: np.ndarray, predicted: np.ndarray) -> FitReport:
    residuals = predicted - observed
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((observed - np.mean(observed)) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else float("-inf")
    else:
        r2 = 1.0 - ss_res / ss_tot
    nonzero = observed != 0.0
    mape = float(np.mean(np.abs(residuals[nonzero] / observed[nonzero])) * 100.0) if nonzero.any() else float("nan")
    return FitReport(
        r2=r2,
        mae=float(np.mean(np.abs(residuals))),
        rmse=math.sqrt(ss_res / observed.size),
        mape=mape,
        per_condition_residuals=[float(r) for r in residuals],
        n_mape_excluded=int(np.sum(~nonzero)),
    )


def _lstsq(design: np.ndarray, y: np.ndarray) -> np.ndarray:
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    return coef


def fit_gaussian(summaries: list[ConditionSummary]) -> tuple[GaussianCoefficients, FitReport]:
    """OLS of observed variance on size^2; metrics on variance."""
    if len(summaries) < 3:
        raise FitError(f"need at least 3 conditions, got {len(summaries)}")
    sizes2 = np.array([s.condition.size_mm**2 for s in summaries])
    if np.unique(sizes2).size < 2:
        raise RankDeficiencyError("all target sizes are equal; variance slope is unidentifiable")
    var_obs = np.array([s.moments.sigma**2 for s in summaries])
    a, b = _lstsq(np.column_stack([np.ones_like(sizes2), sizes2]), var_obs)
    coeffs = GaussianCoefficients(a=float(a), b=float(b))
    return coeffs, _report(var_obs, coeffs.a + coeffs.b * sizes2)


def fit_gamma1(summaries: list[ConditionSummary]) -> tuple[float, float, FitReport]:
    """Hinge fit of edge-relative skewness on edge distance by breakpoint scan.

    Candidates are the observed edge distances (plus one past the maximum);
    for each, the linear segment below the candidate is fit by OLS, the rest
    is constrained to zero, and the candidate minimizing hinge SSE over all
    conditions wins. Candidates violating c > 0, d < 0 are rejected.
    """
    if len(summaries) < 4:
        raise FitError(f"need at least 4 conditions, got {len(summaries)}")
    d_edge = np.array([s.condition.d_edge_mm for s in summaries])
    gamma = np.array([s.moments.gamma1 for s in summaries])

    candidates = sorted(set(d_edge.tolist()))
    candidates.append(candidates[-1] * 2 + 1.0)
    best = None
    for d_star in candidates:
        mask = d_edge < d_star
        if np.unique(d_edge[mask]).size < 2:
            continue
        c, d = _lstsq(np.column_stack([np.ones(int(mask.sum())), d_edge[mask]]), gamma[mask])
        if not (c > 0.0 and d < 0.0):
            continue
        sse = float(np.sum((np.maximum(0.0, c + d * d_edge) - gamma) ** 2))
        if best is None or sse < best[0]:
            best = (sse, float(c), float(d))
    if best is None:
        raise NoValidHingeError("no breakpoint candidate yields c > 0 and d < 0")
    _, c, d = best
    return c, d, _report(gamma, np.maximum(0.0, c + d * d_edge))


def fit_sigma(
    summaries: list[ConditionSummary], c: float, d: float
) -> tuple[float, float, float, float, float, FitReport]:
    """Piecewise OLS of variance; metrics on SD over all conditions."""
    thr = -c / d
    near = [s for s in summaries if s.condition.d_edge_mm < thr]
    far = [s for s in summaries if s.condition.d_edge_mm >= thr]
    if len(near) < 3 or len(far) < 3:
        raise RegimeCoverageError(
            f"need at least 3 conditions per regime, got {len(near)} near / {len(far)} far"
        )

    def design_near(group):
        return np.column_stack(
            [np.ones(len(group)), [s.condition.size_mm**2 for s in group], [s.condition.margin_mm for s in group]]
        )

    def design_far(group):
        return np.column_stack([np.ones(len(group)), [s.condition.size_mm**2 for s in group]])

    e, f, g = _lstsq(design_near(near), np.array([s.moments.sigma**2 for s in near]))
    h, i = _lstsq(design_far(far), np.array([s.moments.sigma**2 for s in far]))

    flags = []
    pred_sd, obs_sd = [], []
    for s in summaries:
        if s.condition.d_edge_mm < thr:
            var = e + f * s.condition.size_mm**2 + g * s.condition.margin_mm
        else:
            var = h + i * s.condition.size_mm**2
        if var <= 0.0:
            flags.append(
                f"nonpositive predicted variance {var:.4g} at size={s.condition.size_mm}, margin={s.condition.margin_mm}"
            )
        pred_sd.append(math.sqrt(max(var, 0.0)))
        obs_sd.append(s.moments.sigma)
    report = _report(np.array(obs_sd), np.array(pred_sd))
    report.flags = flags
    return float(e), float(f), float(g), float(h), float(i), report


def fit_mu(summaries: list[ConditionSummary], c: float, d: float) -> tuple[float, float, float, FitReport]:
    """Quadratic OLS of the mean offset over near-edge conditions.

    The far branch is fixed at zero and not fitted; metrics cover the fitted
    near-edge subset.
    """
    thr = -c / d
    near = [s for s in summaries if s.condition.d_edge_mm < thr]
    d_near = np.array([s.condition.d_edge_mm for s in near])
    if np.unique(d_near).size < 3:
        raise FitError(f"need at least 3 distinct near-edge distances, got {np.unique(d_near).size}")
    mu_obs = np.array([s.moments.mu for s in near])
    p0, p1, p2 = _lstsq(np.column_stack([np.ones(d_near.size), d_near, d_near**2]), mu_obs)
    if abs(p2) < _QUADRATIC_TOL:
        raise DegenerateQuadraticError(f"quadratic term {p2:.3g} below tolerance; vertex undefined")
    k = float(p2)
    l = float(-p1 / (2.0 * p2))
    j = float(p0) - k * l**2
    return j, k, l, _report(mu_obs, j + k * (d_near - l) ** 2)


def fit_edge_model(summaries: list[ConditionSummary]) -> tuple[EdgeModelCoefficients, dict[str, FitReport]]:
    """Chained fit (skewness hinge, then variance and mean offset)."""
    c, d, gamma_report = fit_gamma1(summaries)
    e, f, g, h, i, sigma_report = fit_sigma(summaries, c, d)
    j, k, l, mu_report = fit_mu(summaries, c, d)
    coeffs = EdgeModelCoefficients(c=c, d=d, e=e, f=f, g=g, h=h, i=i, j=j, k=k, l=l)
    return coeffs, {"gamma1": gamma_report, "sigma": sigma_report, "mu": mu_report}


def evaluate_sr(
    summaries: list[ConditionSummary], model: EdgeModelCoefficients | GaussianCoefficients
) -> FitReport:
    """Predicted vs observed success rate per condition, both in percent."""
    obs = np.array([s.observed_sr * 100.0 for s in summaries])
    if isinstance(model, EdgeModelCoefficients):
        pred = np.array([predict_sr(s.condition, model).sr * 100.0 for s in summaries])
    else:
        pred = np.array([gaussian_sr(s.condition, model) * 100.0 for s in summaries])
    return _report(obs, pred)


def loocv(summaries: list[ConditionSummary], pipeline: str = "skewed") -> FitReport:
    """Leave-one-condition-out refit of the full pipeline; held-out SR metrics."""
    if pipeline not in ("skewed", "gaussian"):
        raise ValueError(f"pipeline must be 'skewed' or 'gaussian', got {pipeline!r}")
    if len(summaries) < 5:
        raise FitError(f"need at least 5 conditions for LOOCV, got {len(summaries)}")
    obs, pred = [], []
    for fold, held in enumerate(summaries):
        rest = summaries[:fold] + summaries[fold + 1 :]
        try:
            if pipeline == "skewed":
                coeffs, _ = fit_edge_model(rest)
                p = predict_sr(held.condition, coeffs).sr
            else:
                g, _ = fit_gaussian(rest)
                p = gaussian_sr(held.condition, g)
        except (FitError, ValueError) as exc:
            raise FitError(f"LOOCV fold {fold} (d_edge={held.condition.d_edge_mm:.3f}): {exc}") from exc
        obs.append(held.observed_sr * 100.0)
        pred.append(p * 100.0)
    report = _report(np.array(obs), np.array(pred))
    report.loocv_r2 = report.r2
    report.loocv_mae = report.mae
    return report


def loocv_quantity(summaries: list[ConditionSummary], quantity: str) -> tuple[float, float]:
    """Held-out (R^2, MAE) for one table row, refitting its chain per fold.

    quantity: gaussian_sigma2, gaussian_sr, gamma1, sigma, mu, or sr.
    The mu row scores only conditions that are near-edge under the full fit,
    matching the fitted domain of the quadratic.
    """
    if len(summaries) < 5:
        raise FitError(f"need at least 5 conditions for LOOCV, got {len(summaries)}")
    score_mask = [True] * len(summaries)
    if quantity == "mu":
        c_full, d_full, _ = fit_gamma1(summaries)
        score_mask = [s.condition.d_edge_mm < -c_full / d_full for s in summaries]

    obs, pred = [], []
    for fold, held in enumerate(summaries):
        if not score_mask[fold]:
            continue
        rest = summaries[:fold] + summaries[fold + 1 :]
        cond = held.condition
        if quantity == "gaussian_sigma2":
            g, _ = fit_gaussian(rest)
            obs.append(held.moments.sigma**2)
            pred.append(g.a + g.b * cond.size_mm**2)
        elif quantity == "gaussian_sr":
            g, _ = fit_gaussian(rest)
            obs.append(held.observed_sr * 100.0)
            pred.append(gaussian_sr(cond, g) * 100.0)
        elif quantity == "gamma1":
            c, d, _ = fit_gamma1(rest)
            obs.append(held.moments.gamma1)
            pred.append(max(0.0, c + d * cond.d_edge_mm))
        elif quantity in ("sigma", "mu", "sr"):
            coeffs, _ = fit_edge_model(rest)
            prediction = predict_sr(cond, coeffs)
            if quantity == "sigma":
                obs.append(held.moments.sigma)
                pred.append(prediction.sigma_mm)
            elif quantity == "mu":
                # summaries are edge-relative; undo the raw-axis mirror
                obs.append(held.moments.mu)
                pred.append(prediction.mu_mm * cond.side_sign)
            else:
                obs.append(held.observed_sr * 100.0)
                pred.append(prediction.sr * 100.0)
        else:
            raise ValueError(f"unknown quantity {quantity!r}")
    report = _report(np.array(obs), np.array(pred))
    return report.r2, report.mae
