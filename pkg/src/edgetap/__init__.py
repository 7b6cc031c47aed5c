"""edgetap: tap success-rate prediction near screen edges.

A skew-normal tap-coordinate model with a Dual-Gaussian-style baseline,
a fitting pipeline for tap logs, a synthetic-experiment simulator, and
CLI/HTTP front ends.
"""

from .edge_model import (
    EdgeModelCoefficients,
    EdgeSide,
    GaussianCoefficients,
    SrPrediction,
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
from .experiment_data import (
    ConditionSummary,
    DeviceGeometry,
    TapSample,
    filter_outliers,
    load_tap_log,
    summarize,
)
from .fitting import (
    FitReport,
    evaluate_sr,
    fit_edge_model,
    fit_gamma1,
    fit_gaussian,
    fit_mu,
    fit_sigma,
    loocv,
)
from .presets import Preset, list_presets, load_preset, save_preset
from .simulator import ExperimentDesign, generate_experiment, monte_carlo_sr, write_tap_log
from .skew_normal import (
    SkewNormalShape,
    TapMoments,
    cdf,
    fit_mle,
    interval_probability,
    likelihood_ratio_statistic,
    moments_to_shape,
    pdf,
    sample,
    shape_to_moments,
)

__version__ = "0.1.0"

__all__ = [
    "ConditionSummary",
    "DeviceGeometry",
    "EdgeModelCoefficients",
    "EdgeSide",
    "ExperimentDesign",
    "FitReport",
    "GaussianCoefficients",
    "Preset",
    "SkewNormalShape",
    "SrPrediction",
    "TapMoments",
    "TapSample",
    "TargetCondition",
    "cdf",
    "evaluate_sr",
    "filter_outliers",
    "fit_edge_model",
    "fit_gamma1",
    "fit_gaussian",
    "fit_mle",
    "fit_mu",
    "fit_sigma",
    "gaussian_sigma",
    "gaussian_sr",
    "generate_experiment",
    "interval_probability",
    "likelihood_ratio_statistic",
    "list_presets",
    "load_preset",
    "load_tap_log",
    "loocv",
    "moments_to_shape",
    "monte_carlo_sr",
    "pdf",
    "predict_gamma1",
    "predict_mu",
    "predict_sigma",
    "predict_sr",
    "predict_sr_2d",
    "sample",
    "save_preset",
    "shape_to_moments",
    "summarize",
    "threshold",
    "write_tap_log",
]
