"""Tap-log ingestion, outlier filtering, and per-condition aggregation.

CSV schema (UTF-8, header required):
    participant,set,trial,edge,axis,margin_px,size_px,tap_px,perp_miss,success
with edge in {left,right,top,bottom}. Millimeter variants margin_mm, size_mm,
tap_mm are accepted instead of (or alongside) the pixel columns.

Tap coordinates in the log are relative to the target center along the
constrained raw axis. Stored coord_mm is edge-relative-signed: positive
points away from the screen edge on both axes, so one fitting path serves
horizontal and vertical edges.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .edge_model import EdgeSide, TargetCondition
from .errors import InsufficientDataError, SchemaError, UnitMismatchError
from .skew_normal import TapMoments

EDGE_TO_SIDE = {
    "left": EdgeSide.NEGATIVE,
    "top": EdgeSide.NEGATIVE,
    "right": EdgeSide.POSITIVE,
    "bottom": EdgeSide.POSITIVE,
}

# Pixel 6a: 1080 px across a 64.1 mm display.
DEFAULT_PX_PER_MM = 16.849

_UNIT_TOL_MM = 0.01


@dataclass(frozen=True)
class DeviceGeometry:
    px_per_mm: float = DEFAULT_PX_PER_MM
    display_w_mm: float = 64.1
    display_h_mm: float = 142.5

    def __post_init__(self):
        if not (math.isfinite(self.px_per_mm) and self.px_per_mm > 0.0):
            raise ValueError(f"px_per_mm must be positive, got {self.px_per_mm}")


@dataclass(frozen=True)
class TapSample:
    participant_id: str
    set_index: int
    trial: int
    condition: TargetCondition
    coord_mm: float  # edge-relative-signed, positive = away from the edge
    perpendicular_miss: bool
    success: bool


@dataclass
class RemovalCounts:
    n_input: int = 0
    n_practice: int = 0
    n_perpendicular: int = 0
    n_3sd: int = 0
    per_condition: dict = field(default_factory=dict)  # key -> [perp, 3sd]

    @property
    def n_kept(self) -> int:
        return self.n_input - self.n_practice - self.n_perpendicular - self.n_3sd


@dataclass(frozen=True)
class ConditionSummary:
    condition: TargetCondition
    n_kept: int
    n_removed_perpendicular: int
    n_removed_3sd: int
    moments: TapMoments
    observed_sr: float


def condition_key(cond: TargetCondition) -> tuple:
    return (cond.edge_side.value, cond.size_mm, cond.margin_mm)


def _parse_bool(raw: str, column: str, row_num: int) -> bool:
    v = raw.strip().lower()
    if v in ("1", "true", "yes"):
        return True
    if v in ("0", "false", "no"):
        return False
    raise SchemaError(f"row {row_num}: column {column!r} has non-boolean value {raw!r}")


def _parse_float(raw: str, column: str, row_num: int) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise SchemaError(f"row {row_num}: column {column!r} has non-numeric value {raw!r}") from None


def _mm_value(row: dict, base: str, geometry: DeviceGeometry, row_num: int) -> float:
    px_raw = row.get(f"{base}_px")
    mm_raw = row.get(f"{base}_mm")
    has_px = px_raw not in (None, "")
    has_mm = mm_raw not in (None, "")
    if not has_px and not has_mm:
        raise SchemaError(f"row {row_num}: missing both {base}_px and {base}_mm")
    mm_from_px = _parse_float(px_raw, f"{base}_px", row_num) / geometry.px_per_mm if has_px else None
    mm = _parse_float(mm_raw, f"{base}_mm", row_num) if has_mm else None
    if has_px and has_mm and abs(mm_from_px - mm) > _UNIT_TOL_MM:
        raise UnitMismatchError(
            f"row {row_num}: {base}_px implies {mm_from_px:.4f} mm but {base}_mm is {mm:.4f} mm"
        )
    # mm columns are authoritative when present.
    return mm if has_mm else mm_from_px


def load_tap_log(source, geometry: DeviceGeometry = DeviceGeometry()) -> list[TapSample]:
    """Parse a tap log from a path or text stream into TapSample rows."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return load_tap_log(fh, geometry)
    if isinstance(source, str):  # pragma: no cover - path branch above
        source = io.StringIO(source)

    reader = csv.DictReader(source)
    if reader.fieldnames is None:
        raise SchemaError("empty input: no header row")
    base_cols = {"participant", "set", "trial", "edge", "axis", "perp_miss", "success"}
    missing = base_cols - set(reader.fieldnames)
    if missing:
        raise SchemaError(f"missing required columns: {', '.join(sorted(missing))}")

    samples: list[TapSample] = []
    for row_num, row in enumerate(reader, start=2):
        if any(row.get(c) in (None, "") for c in base_cols):
            raise SchemaError(f"row {row_num}: missing required field")
        edge = row["edge"].strip().lower()
        if edge not in EDGE_TO_SIDE:
            raise SchemaError(f"row {row_num}: unknown edge {row['edge']!r}")
        side = EDGE_TO_SIDE[edge]
        try:
            set_index = int(row["set"])
            trial = int(row["trial"])
        except ValueError:
            raise SchemaError(f"row {row_num}: set/trial must be integers") from None
        if set_index < 0:
            raise SchemaError(f"row {row_num}: set must be >= 0")
        margin_mm = _mm_value(row, "margin", geometry, row_num)
        size_mm = _mm_value(row, "size", geometry, row_num)
        tap_mm = _mm_value(row, "tap", geometry, row_num)
        if size_mm <= 0 or margin_mm < 0:
            raise SchemaError(f"row {row_num}: size must be > 0 and margin >= 0")
        cond = TargetCondition(size_mm=size_mm, margin_mm=margin_mm, edge_side=side, axis_label=row["axis"].strip())
        samples.append(
            TapSample(
                participant_id=row["participant"].strip(),
                set_index=set_index,
                trial=trial,
                condition=cond,
                coord_mm=cond.side_sign * tap_mm,
                perpendicular_miss=_parse_bool(row["perp_miss"], "perp_miss", row_num),
                success=_parse_bool(row["success"], "success", row_num),
            )
        )
    return samples


def filter_outliers(samples: list[TapSample]) -> tuple[list[TapSample], RemovalCounts]:
    """Apply the three-step outlier procedure.

    1. Drop set 0 (practice). 2. Drop perpendicular misses. 3. Per
    participant-condition group, drop taps more than 3 sample SDs from the
    group mean, in a single pass.
    """
    counts = RemovalCounts(n_input=len(samples))
    after_practice = []
    for s in samples:
        if s.set_index == 0:
            counts.n_practice += 1
        else:
            after_practice.append(s)

    grouped: dict[tuple, list[TapSample]] = {}
    for s in after_practice:
        key = condition_key(s.condition)
        ckey = counts.per_condition.setdefault(key, [0, 0])
        if s.perpendicular_miss:
            counts.n_perpendicular += 1
            ckey[0] += 1
            continue
        grouped.setdefault((s.participant_id, key), []).append(s)

    kept: list[TapSample] = []
    for (_, key), group in grouped.items():
        coords = np.array([s.coord_mm for s in group])
        if coords.size >= 2:
            mean = float(np.mean(coords))
            sd = float(np.std(coords, ddof=1))
        else:
            mean, sd = float(coords[0]) if coords.size else 0.0, 0.0
        for s in group:
            if sd > 0.0 and abs(s.coord_mm - mean) > 3.0 * sd:
                counts.n_3sd += 1
                counts.per_condition[key][1] += 1
            else:
                kept.append(s)
    kept.sort(key=lambda s: (s.participant_id, s.set_index, s.trial, condition_key(s.condition)))
    return kept, counts


def _participant_moments(coords: np.ndarray) -> tuple[float, float, float]:
    n = coords.size
    mean = float(np.mean(coords))
    sd = float(np.std(coords, ddof=1))
    if sd == 0.0:
        return mean, sd, 0.0
    # Adjusted Fisher-Pearson sample skewness.
    g1 = float(np.mean(((coords - mean) / (np.std(coords))) ** 3))
    skew = math.sqrt(n * (n - 1)) / (n - 2) * g1
    return mean, sd, skew


def summarize(samples: list[TapSample], removal: RemovalCounts | None = None) -> list[ConditionSummary]:
    """Per-condition moments (participant-averaged) and pooled success rate."""
    by_condition: dict[tuple, dict[str, list[TapSample]]] = {}
    conditions: dict[tuple, TargetCondition] = {}
    for s in samples:
        key = condition_key(s.condition)
        conditions.setdefault(key, s.condition)
        by_condition.setdefault(key, {}).setdefault(s.participant_id, []).append(s)

    summaries = []
    for key in sorted(by_condition, key=lambda k: (conditions[k].d_edge_mm, conditions[k].size_mm, k)):
        groups = by_condition[key]
        mus, sds, skews = [], [], []
        n_kept = 0
        n_success = 0
        for pid in sorted(groups):
            taps = groups[pid]
            if len(taps) < 3:
                raise InsufficientDataError(
                    f"participant {pid!r}, condition {key}: only {len(taps)} kept taps (need >= 3)"
                )
            coords = np.array([t.coord_mm for t in taps])
            mu, sd, skew = _participant_moments(coords)
            mus.append(mu)
            sds.append(sd)
            skews.append(skew)
            n_kept += len(taps)
            n_success += sum(t.success for t in taps)
        perp, sd3 = removal.per_condition.get(key, (0, 0)) if removal else (0, 0)
        summaries.append(
            ConditionSummary(
                condition=conditions[key],
                n_kept=n_kept,
                n_removed_perpendicular=perp,
                n_removed_3sd=sd3,
                moments=TapMoments(
                    mu=float(np.mean(mus)), sigma=float(np.mean(sds)), gamma1=float(np.mean(skews))
                ),
                observed_sr=n_success / n_kept,
            )
        )
    return summaries


def pooled_coordinates(samples: list[TapSample]) -> dict[tuple, np.ndarray]:
    """Kept tap coordinates pooled per condition (for distributional tests)."""
    pooled: dict[tuple, list[float]] = {}
    for s in samples:
        pooled.setdefault(condition_key(s.condition), []).append(s.coord_mm)
    return {k: np.array(v) for k, v in pooled.items()}
