"""Synthetic tap experiments with known ground truth, plus the Monte Carlo
success-rate oracle used throughout testing.

Seeding: a master seed plus (participant, condition) spawn keys derive
independent PCG64 streams, so output is deterministic regardless of how the
conditions are scheduled.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .edge_model import (
    EdgeModelCoefficients,
    EdgeSide,
    TargetCondition,
    predict_sr,
)
from .errors import InadmissibleTruthError, NonpositiveVarianceError
from .skew_normal import SkewNormalShape, TapMoments, moments_to_shape

DEFAULT_MARGINS_MM = (0.0, 1.560, 3.119, 4.679, 7.798, 9.358, 12.477, 15.596, 18.715)
DEFAULT_SIZES_MM = (1.560, 2.339, 3.119, 4.679, 7.798)

CSV_COLUMNS = ("participant", "set", "trial", "edge", "axis", "margin_mm", "size_mm", "tap_mm", "perp_miss", "success")


@dataclass(frozen=True)
class ExperimentDesign:
    margins_mm: tuple = DEFAULT_MARGINS_MM
    sizes_mm: tuple = DEFAULT_SIZES_MM
    participants: int = 15
    sets: int = 25
    edge_side: EdgeSide = EdgeSide.NEGATIVE
    seed: int = 0
    participant_mu_sd: float = 0.0  # per-participant additive mean offset, mm
    outlier_rate: float = 0.0  # fraction of taps replaced by far (5-8 SD) outliers

    def __post_init__(self):
        if any(m < 0 for m in self.margins_mm) or any(s <= 0 for s in self.sizes_mm):
            raise ValueError("margins must be >= 0 and sizes > 0")
        if self.participants * self.sets < 1:
            raise ValueError("participants * sets must be >= 1")
        if not 0.0 <= self.outlier_rate < 1.0:
            raise ValueError(f"outlier_rate must be in [0, 1), got {self.outlier_rate}")

    def conditions(self) -> list[TargetCondition]:
        axis = "x" if self.edge_side is EdgeSide.NEGATIVE else "y"
        return [
            TargetCondition(size_mm=s, margin_mm=m, edge_side=self.edge_side, axis_label=axis)
            for m in self.margins_mm
            for s in self.sizes_mm
        ]


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def generate_experiment(design: ExperimentDesign, truth: EdgeModelCoefficients) -> list[dict]:
    """One tap per trial drawn from each condition's implied shape.

    Returns CSV-schema rows; write with write_tap_log. Raw-axis coordinates
    are relative to the target center.
    """
    conditions = design.conditions()
    predictions = []
    for cond in conditions:
        try:
            predictions.append(predict_sr(cond, truth))
        except NonpositiveVarianceError as exc:
            raise InadmissibleTruthError(f"truth coefficients invalid over design envelope: {exc}") from exc

    edge_label = "left" if design.edge_side is EdgeSide.NEGATIVE else "bottom"
    axis = "x" if design.edge_side is EdgeSide.NEGATIVE else "y"
    rows: list[dict] = []
    for p in range(design.participants):
        pid = f"P{p + 1:02d}"
        offset = 0.0
        if design.participant_mu_sd > 0.0:
            offset = float(_stream(design.seed, 0, p).normal(0.0, design.participant_mu_sd))
        per_condition_taps = []
        for ci, (cond, pred) in enumerate(zip(conditions, predictions)):
            rng = _stream(design.seed, 1, p, ci)
            moments = TapMoments(mu=pred.mu_mm + offset, sigma=pred.sigma_mm, gamma1=pred.gamma1)
            shape = moments_to_shape(moments)
            delta = shape.delta
            u0 = rng.standard_normal(design.sets)
            u1 = rng.standard_normal(design.sets)
            taps = shape.xi + shape.omega * (delta * np.abs(u0) + math.sqrt(1.0 - delta * delta) * u1)
            if design.outlier_rate > 0.0:
                mask = rng.random(design.sets) < design.outlier_rate
                mags = (5.0 + 3.0 * rng.random(design.sets)) * moments.sigma
                signs = np.where(rng.random(design.sets) < 0.5, -1.0, 1.0)
                taps = np.where(mask, moments.mu + signs * mags, taps)
            per_condition_taps.append(taps)
        for s in range(design.sets):
            for ci, cond in enumerate(conditions):
                t = float(per_condition_taps[ci][s])
                rows.append(
                    {
                        "participant": pid,
                        "set": s,
                        "trial": ci,
                        "edge": edge_label,
                        "axis": axis,
                        "margin_mm": repr(cond.margin_mm),
                        "size_mm": repr(cond.size_mm),
                        "tap_mm": repr(t),
                        "perp_miss": 0,
                        "success": int(abs(t) <= cond.size_mm / 2.0),
                    }
                )
    return rows


def write_tap_log(rows: list[dict], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def monte_carlo_sr(shape: SkewNormalShape, size_mm: float, n: int, seed: int) -> tuple[float, float]:
    """Fraction of sampled taps inside [-size/2, size/2] and its standard error."""
    if n < 10_000:
        raise ValueError(f"n must be >= 10000, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    delta = shape.delta
    u0 = rng.standard_normal(n)
    u1 = rng.standard_normal(n)
    x = shape.xi + shape.omega * (delta * np.abs(u0) + math.sqrt(1.0 - delta * delta) * u1)
    p = float(np.mean(np.abs(x) <= size_mm / 2.0))
    return p, math.sqrt(p * (1.0 - p) / n)
