"""Named coefficient presets: JSON key-value documents with fixed field names.

Resolution order for a preset name: explicit file path, the directory given
to the loader (or EDGETAP_PRESET_DIR), then the bundled presets.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .edge_model import EdgeModelCoefficients, GaussianCoefficients
from .errors import PresetError

SPEC_VERSION = "1.0"

_COEFF_FIELDS = ("c", "d", "e", "f", "g", "h", "i", "j", "k", "l")
_REQUIRED_FIELDS = _COEFF_FIELDS + ("name", "gaussian_a", "gaussian_b")


@dataclass(frozen=True)
class Preset:
    name: str
    device: str
    edge: str
    axis: str
    coefficients: EdgeModelCoefficients
    gaussian: GaussianCoefficients
    units: str = "mm"
    spec_version: str = SPEC_VERSION

    def to_dict(self) -> dict:
        d = {"name": self.name, "device": self.device, "edge": self.edge, "axis": self.axis}
        for f in _COEFF_FIELDS:
            d[f] = getattr(self.coefficients, f)
        d["gaussian_a"] = self.gaussian.a
        d["gaussian_b"] = self.gaussian.b
        d["units"] = self.units
        d["spec_version"] = self.spec_version
        return d


def preset_from_dict(data: dict, default_name: str = "inline") -> Preset:
    missing = [f for f in _REQUIRED_FIELDS if f not in data and f != "name"]
    if missing:
        raise PresetError(f"preset document is missing fields: {', '.join(missing)}")
    try:
        coeffs = EdgeModelCoefficients(**{f: float(data[f]) for f in _COEFF_FIELDS})
    except (TypeError, ValueError) as exc:
        raise PresetError(f"invalid preset coefficients: {exc}") from exc
    return Preset(
        name=str(data.get("name", default_name)),
        device=str(data.get("device", "")),
        edge=str(data.get("edge", "")),
        axis=str(data.get("axis", "")),
        coefficients=coeffs,
        gaussian=GaussianCoefficients(a=float(data["gaussian_a"]), b=float(data["gaussian_b"])),
        units=str(data.get("units", "mm")),
        spec_version=str(data.get("spec_version", SPEC_VERSION)),
    )


def _load_file(path: Path) -> Preset:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise PresetError(f"cannot read preset {path}: {exc}") from exc
    return preset_from_dict(data, default_name=path.stem)


def _bundled_dir():
    return resources.files("edgetap") / "presets"


def preset_search_dirs(preset_dir: str | os.PathLike | None = None) -> list[Path]:
    dirs = []
    if preset_dir is not None:
        dirs.append(Path(preset_dir))
    env = os.environ.get("EDGETAP_PRESET_DIR")
    if env:
        dirs.append(Path(env))
    return dirs


def load_preset(name_or_path: str, preset_dir: str | os.PathLike | None = None) -> Preset:
    """Resolve a preset by file path or by name."""
    p = Path(name_or_path)
    if p.suffix == ".json" or p.exists():
        if not p.exists():
            raise PresetError(f"preset file not found: {p}")
        return _load_file(p)
    for d in preset_search_dirs(preset_dir):
        candidate = d / f"{name_or_path}.json"
        if candidate.exists():
            return _load_file(candidate)
    bundled = _bundled_dir() / f"{name_or_path}.json"
    if bundled.is_file():
        return preset_from_dict(json.loads(bundled.read_text(encoding="utf-8")), default_name=name_or_path)
    raise PresetError(f"unknown preset: {name_or_path}")


def list_presets(preset_dir: str | os.PathLike | None = None) -> list[Preset]:
    """All resolvable presets; user directories shadow bundled names."""
    found: dict[str, Preset] = {}
    for f in sorted(_bundled_dir().iterdir()):
        if f.name.endswith(".json"):
            preset = preset_from_dict(json.loads(f.read_text(encoding="utf-8")), default_name=f.name[:-5])
            found[preset.name] = preset
    for d in reversed(preset_search_dirs(preset_dir)):
        if d.is_dir():
            for f in sorted(d.glob("*.json")):
                preset = _load_file(f)
                found[preset.name] = preset
    return [found[k] for k in sorted(found)]


def save_preset(preset: Preset, path: str | os.PathLike) -> None:
    Path(path).write_text(json.dumps(preset.to_dict(), indent=2) + "\n", encoding="utf-8")
