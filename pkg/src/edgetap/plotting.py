"""Report rendering: delimited datasets plus matplotlib figures.

Every figure has a CSV twin carrying the plotted numbers, so downstream
tooling never has to scrape graphics.
"""

from __future__ import annotations

import csv
import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .skew_normal import SkewNormalShape, pdf

DENSITY_POINTS = 1001
DENSITY_HALF_WIDTH = 8.0  # in units of omega; tail mass beyond is ~1e-15


def density_curve(shape: SkewNormalShape, points: int = DENSITY_POINTS) -> list[tuple[float, float]]:
    """(x, density) samples spanning xi +/- 8 omega."""
    xs = np.linspace(shape.xi - DENSITY_HALF_WIDTH * shape.omega, shape.xi + DENSITY_HALF_WIDTH * shape.omega, points)
    return [(float(x), pdf(float(x), shape)) for x in xs]


def write_csv(path: str | os.PathLike, header: list[str], rows: list) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def scatter_figure(path, observed, predicted, label: str, unit: str = "") -> None:
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    lo = min(min(observed), min(predicted))
    hi = max(max(observed), max(predicted))
    pad = 0.05 * (hi - lo or 1.0)
    ax.plot([lo - pad, hi + pad], [lo - pad, hi + pad], color="0.6", lw=1, zorder=1)
    ax.scatter(predicted, observed, s=18, zorder=2)
    suffix = f" ({unit})" if unit else ""
    ax.set_xlabel(f"predicted {label}{suffix}")
    ax.set_ylabel(f"observed {label}{suffix}")
    ax.set_title(label)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def lr_figure(path, d_edge, lr_stat) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.scatter(d_edge, lr_stat, s=18)
    ax.set_xlabel("edge distance (mm)")
    ax.set_ylabel("likelihood-ratio statistic")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def density_overlay_figure(path, coords, shape: SkewNormalShape, size_mm: float, title: str) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.hist(coords, bins=30, density=True, alpha=0.5, label="observed")
    curve = density_curve(shape)
    ax.plot([x for x, _ in curve], [y for _, y in curve], lw=1.5, label="model")
    for bound in (-size_mm / 2.0, size_mm / 2.0):
        ax.axvline(bound, color="0.4", ls="--", lw=1)
    lo = min(min(coords), -size_mm)
    hi = max(max(coords), size_mm)
    ax.set_xlim(lo, hi)
    ax.set_xlabel("tap coordinate (mm, target-centered)")
    ax.set_ylabel("density (1/mm)")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def ensure_dir(path: str | os.PathLike) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
