"""Shared request handling: the CLI and the HTTP service both build their
responses here, so the two paths are numerically identical by construction.
"""

from __future__ import annotations

from .edge_model import TargetCondition, gaussian_sr, predict_sr, threshold
from .errors import PresetError
from .experiment_data import EDGE_TO_SIDE
from .plotting import density_curve
from .presets import Preset

VALID_EDGES = tuple(EDGE_TO_SIDE)


def build_predict_response(
    preset: Preset,
    size_mm: float,
    margin_mm: float,
    edge: str,
    curve_points: int | None = None,
) -> dict:
    """PredictResponse document for one target placement."""
    edge = edge.strip().lower()
    if edge not in EDGE_TO_SIDE:
        raise ValueError(f"edge must be one of {', '.join(VALID_EDGES)}, got {edge!r}")
    cond = TargetCondition(
        size_mm=size_mm,
        margin_mm=margin_mm,
        edge_side=EDGE_TO_SIDE[edge],
        axis_label="x" if edge in ("left", "right") else "y",
    )
    pred = predict_sr(cond, preset.coefficients)
    response = {
        "sr": pred.sr,
        "gamma1": pred.gamma1,
        "sigma_mm": pred.sigma_mm,
        "mu_mm": pred.mu_mm,
        "shape": {"xi": pred.shape.xi, "omega": pred.shape.omega, "alpha": pred.shape.alpha},
        "regime": pred.regime,
        "threshold_mm": threshold(preset.coefficients),
        "gaussian_sr": gaussian_sr(cond, preset.gaussian),
    }
    if curve_points is not None:
        response["curve"] = [[x, y] for x, y in density_curve(pred.shape, points=curve_points)]
    return response


def resolve_preset(spec, preset_dir=None) -> Preset:
    """Accept a preset name/path or an inline coefficient document."""
    from .presets import load_preset, preset_from_dict

    if isinstance(spec, dict):
        return preset_from_dict(spec)
    if isinstance(spec, str):
        return load_preset(spec, preset_dir=preset_dir)
    raise PresetError(f"preset must be a name or a coefficient document, got {type(spec).__name__}")
