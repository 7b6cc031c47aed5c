"""Command-line entry points: predict, fit, simulate, evaluate, plot, serve.

Exit codes: 0 success, 1 data/fit errors, 2 flag errors, 3 preset errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import api
from .edge_model import EdgeSide
from .errors import EdgeTapError, PresetError
from .experiment_data import (
    DeviceGeometry,
    filter_outliers,
    load_tap_log,
    pooled_coordinates,
    summarize,
)
from .fitting import evaluate_sr, fit_edge_model, fit_gaussian, loocv_quantity
from .presets import Preset, load_preset, save_preset
from .simulator import (
    DEFAULT_MARGINS_MM,
    DEFAULT_SIZES_MM,
    ExperimentDesign,
    generate_experiment,
    write_tap_log,
)
from .skew_normal import likelihood_ratio_statistic, moments_to_shape


def _geometry_from_args(args) -> DeviceGeometry:
    return DeviceGeometry(px_per_mm=args.px_per_mm)


def _load_summaries(args):
    samples = load_tap_log(args.log, _geometry_from_args(args))
    kept, counts = filter_outliers(samples)
    return kept, counts, summarize(kept, counts)


def _print_kv(data: dict, indent: str = "") -> None:
    for key, value in data.items():
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_kv(value, indent + "  ")
        elif isinstance(value, list):
            print(f"{indent}{key}: [{len(value)} points]")
        elif isinstance(value, float):
            print(f"{indent}{key}: {value:.6g}")
        else:
            print(f"{indent}{key}: {value}")


def cmd_predict(args) -> int:
    preset = load_preset(args.preset, preset_dir=args.preset_dir)
    response = api.build_predict_response(
        preset, args.size_mm, args.margin_mm, args.edge, curve_points=args.curve_points
    )
    if args.format == "json":
        print(json.dumps(response))
    else:
        _print_kv(response)
    return 0


_TABLE_ROWS = (
    ("gaussian", "sigma^2", "gaussian_sigma2"),
    ("gaussian", "SR", "gaussian_sr"),
    ("skewed", "gamma1 (hinge)", "gamma1"),
    ("skewed", "sigma (piecewise)", "sigma"),
    ("skewed", "mu (quadratic)", "mu"),
    ("skewed", "SR", "sr"),
)


def _fit_all(summaries):
    gauss, gauss_report = fit_gaussian(summaries)
    coeffs, reports = fit_edge_model(summaries)
    reports["gaussian_sigma2"] = gauss_report
    reports["gaussian_sr"] = evaluate_sr(summaries, gauss)
    reports["sr"] = evaluate_sr(summaries, coeffs)
    for _, _, quantity in _TABLE_ROWS:
        r2, mae = loocv_quantity(summaries, quantity)
        reports[quantity].loocv_r2 = r2
        reports[quantity].loocv_mae = mae
    return gauss, coeffs, reports


def _constants_text(quantity, gauss, coeffs) -> str:
    if quantity == "gaussian_sigma2":
        return f"a={gauss.a:.4g}, b={gauss.b:.4g}"
    if quantity == "gamma1":
        return f"c={coeffs.c:.4g}, d={coeffs.d:.4g}"
    if quantity == "sigma":
        return f"e={coeffs.e:.4g}, f={coeffs.f:.4g}, g={coeffs.g:.4g}, h={coeffs.h:.4g}, i={coeffs.i:.4g}"
    if quantity == "mu":
        return f"j={coeffs.j:.4g}, k={coeffs.k:.4g}, l={coeffs.l:.4g}"
    return "-"


def _print_fit_table(gauss, coeffs, reports) -> None:
    header = f"{'model':<9} {'quantity':<18} {'constants':<58} {'R2':>7} {'MAE':>8} {'RMSE':>8} {'MAPE%':>8} {'cvR2':>7} {'cvMAE':>8}"
    print(header)
    print("-" * len(header))
    for model, label, quantity in _TABLE_ROWS:
        rep = reports[quantity]
        print(
            f"{model:<9} {label:<18} {_constants_text(quantity, gauss, coeffs):<58} "
            f"{rep.r2:>7.3f} {rep.mae:>8.4g} {rep.rmse:>8.4g} {rep.mape:>8.4g} "
            f"{rep.loocv_r2:>7.3f} {rep.loocv_mae:>8.4g}"
        )


def _report_dict(counts, reports) -> dict:
    rows = {}
    for _, _, quantity in _TABLE_ROWS:
        rep = reports[quantity]
        rows[quantity] = {
            "r2": rep.r2,
            "mae": rep.mae,
            "rmse": rep.rmse,
            "mape": rep.mape,
            "loocv_r2": rep.loocv_r2,
            "loocv_mae": rep.loocv_mae,
            "n_mape_excluded": rep.n_mape_excluded,
            "per_condition_residuals": rep.per_condition_residuals,
            "flags": rep.flags,
        }
    return {
        "rows": rows,
        "removals": {
            "n_input": counts.n_input,
            "n_practice": counts.n_practice,
            "n_perpendicular": counts.n_perpendicular,
            "n_3sd": counts.n_3sd,
            "n_kept": counts.n_kept,
        },
    }


def cmd_fit(args) -> int:
    _, counts, summaries = _load_summaries(args)
    gauss, coeffs, reports = _fit_all(summaries)
    _print_fit_table(gauss, coeffs, reports)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    edge = summaries[0].condition.edge_side
    preset = Preset(
        name=args.name,
        device=args.device,
        edge="left" if edge is EdgeSide.NEGATIVE else "bottom",
        axis=summaries[0].condition.axis_label,
        coefficients=coeffs,
        gaussian=gauss,
    )
    preset_path = out_dir / f"{args.name}.json"
    save_preset(preset, preset_path)
    report_path = out_dir / f"{args.name}.report.json"
    report_path.write_text(json.dumps(_report_dict(counts, reports), indent=2) + "\n", encoding="utf-8")
    print(f"\npreset written to {preset_path}")
    print(f"report written to {report_path}")
    return 0


def _design_from_args(args) -> ExperimentDesign:
    overrides = {}
    if args.design:
        overrides.update(json.loads(Path(args.design).read_text(encoding="utf-8")))
    if args.margins_mm:
        overrides["margins_mm"] = tuple(float(v) for v in args.margins_mm.split(","))
    if args.sizes_mm:
        overrides["sizes_mm"] = tuple(float(v) for v in args.sizes_mm.split(","))
    for name in ("participants", "sets", "seed"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.edge_side:
        overrides["edge_side"] = EdgeSide(args.edge_side)
    if args.outlier_rate is not None:
        overrides["outlier_rate"] = args.outlier_rate
    if args.participant_mu_sd is not None:
        overrides["participant_mu_sd"] = args.participant_mu_sd
    if "edge_side" in overrides and isinstance(overrides["edge_side"], str):
        overrides["edge_side"] = EdgeSide(overrides["edge_side"])
    if "margins_mm" in overrides:
        overrides["margins_mm"] = tuple(overrides["margins_mm"])
    if "sizes_mm" in overrides:
        overrides["sizes_mm"] = tuple(overrides["sizes_mm"])
    return ExperimentDesign(**overrides)


def cmd_simulate(args) -> int:
    preset = load_preset(args.preset, preset_dir=args.preset_dir)
    design = _design_from_args(args)
    rows = generate_experiment(design, preset.coefficients)
    write_tap_log(rows, args.out)
    print(f"{len(rows)} trials written to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    preset = load_preset(args.preset, preset_dir=args.preset_dir)
    _, counts, summaries = _load_summaries(args)
    result = {}
    if args.model in ("skewed", "both"):
        rep = evaluate_sr(summaries, preset.coefficients)
        result["skewed_sr"] = {"r2": rep.r2, "mae": rep.mae, "rmse": rep.rmse, "mape": rep.mape}
    if args.model in ("gaussian", "both"):
        rep = evaluate_sr(summaries, preset.gaussian)
        result["gaussian_sr"] = {"r2": rep.r2, "mae": rep.mae, "rmse": rep.rmse, "mape": rep.mape}
    result["n_conditions"] = len(summaries)
    result["n_kept"] = counts.n_kept
    if args.out:
        Path(args.out).write_text(json.dumps(result, indent=2) + "\n", encoding="utf-8")
    _print_kv(result)
    return 0


def cmd_plot(args) -> int:
    from . import plotting

    preset = load_preset(args.preset, preset_dir=args.preset_dir)
    kept, counts, summaries = _load_summaries(args)
    out_dir = plotting.ensure_dir(args.out_dir)
    ext = args.image_format

    gauss, coeffs, _ = _fit_all(summaries) if args.refit else (preset.gaussian, preset.coefficients, None)

    from .edge_model import gaussian_sr as gaussian_sr_fn
    from .edge_model import predict_sr as predict_sr_fn

    written = []

    def emit_scatter(name, label, unit, observed, predicted):
        csv_path = out_dir / f"scatter_{name}.csv"
        plotting.write_csv(csv_path, ["d_edge_mm", "size_mm", "observed", "predicted"], scatter_rows[name])
        fig_path = out_dir / f"scatter_{name}.{ext}"
        plotting.scatter_figure(fig_path, observed, predicted, label, unit)
        written.extend([csv_path, fig_path])

    scatter_rows = {name: [] for name in ("sr_skewed", "sr_gaussian", "gamma1", "sigma", "mu")}
    obs = {name: [] for name in scatter_rows}
    pred = {name: [] for name in scatter_rows}
    for s in summaries:
        cond = s.condition
        p = predict_sr_fn(cond, coeffs)
        rows = {
            "sr_skewed": (s.observed_sr * 100.0, p.sr * 100.0),
            "sr_gaussian": (s.observed_sr * 100.0, gaussian_sr_fn(cond, gauss) * 100.0),
            "gamma1": (s.moments.gamma1, p.gamma1 * cond.side_sign),
            "sigma": (s.moments.sigma, p.sigma_mm),
            "mu": (s.moments.mu, p.mu_mm * cond.side_sign),
        }
        for name, (o, v) in rows.items():
            scatter_rows[name].append([cond.d_edge_mm, cond.size_mm, o, v])
            obs[name].append(o)
            pred[name].append(v)
    emit_scatter("sr_skewed", "success rate (skewed model)", "%", obs["sr_skewed"], pred["sr_skewed"])
    emit_scatter("sr_gaussian", "success rate (gaussian model)", "%", obs["sr_gaussian"], pred["sr_gaussian"])
    emit_scatter("gamma1", "skewness", "", obs["gamma1"], pred["gamma1"])
    emit_scatter("sigma", "sigma", "mm", obs["sigma"], pred["sigma"])
    emit_scatter("mu", "mu", "mm", obs["mu"], pred["mu"])

    pooled = pooled_coordinates(kept)
    lr_rows = []
    for s in summaries:
        from .experiment_data import condition_key

        coords = pooled[condition_key(s.condition)]
        lr_rows.append([s.condition.d_edge_mm, s.condition.size_mm, likelihood_ratio_statistic(coords)])
    lr_csv = out_dir / "lr_vs_dedge.csv"
    plotting.write_csv(lr_csv, ["d_edge_mm", "size_mm", "lr_statistic"], lr_rows)
    lr_fig = out_dir / f"lr_vs_dedge.{ext}"
    plotting.lr_figure(lr_fig, [r[0] for r in lr_rows], [r[2] for r in lr_rows])
    written.extend([lr_csv, lr_fig])

    # Density overlays: nearest, middle, and farthest condition.
    picks = [0, len(summaries) // 2, len(summaries) - 1]
    for idx in picks:
        s = summaries[idx]
        from .experiment_data import condition_key
        from .skew_normal import TapMoments

        p = predict_sr_fn(s.condition, coeffs)
        shape = p.shape
        tag = f"m{s.condition.margin_mm:g}_s{s.condition.size_mm:g}"
        curve = plotting.density_curve(shape)
        curve_csv = out_dir / f"density_{tag}.csv"
        plotting.write_csv(curve_csv, ["x_mm", "density"], [[x, y] for x, y in curve])
        # Histogram coordinates are edge-relative; mirror the shape to match.
        coords = pooled[condition_key(s.condition)]
        er_shape = moments_to_shape(
            TapMoments(
                mu=p.mu_mm * s.condition.side_sign,
                sigma=p.sigma_mm,
                gamma1=p.gamma1 * s.condition.side_sign,
            )
        )
        fig_path = out_dir / f"density_{tag}.{ext}"
        plotting.density_overlay_figure(
            fig_path,
            coords,
            er_shape,
            s.condition.size_mm,
            f"margin={s.condition.margin_mm:g} mm, size={s.condition.size_mm:g} mm",
        )
        written.extend([curve_csv, fig_path])

    for path in written:
        print(path)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(preset_dir=args.preset_dir), host=args.host, port=args.port)
    return 0


def _add_geometry_flags(parser) -> None:
    parser.add_argument("--px-per-mm", type=float, default=16.849, help="pixel density for px columns")


def _add_preset_dir_flag(parser) -> None:
    parser.add_argument("--preset-dir", default=None, help="extra preset directory (also EDGETAP_PRESET_DIR)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgetap", description="Tap success-rate modeling near screen edges")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="predict the success rate for one target placement")
    p.add_argument("--preset", required=True, help="preset name or JSON file")
    p.add_argument("--size-mm", type=float, required=True)
    p.add_argument("--margin-mm", type=float, required=True)
    p.add_argument("--edge", default="left", choices=["left", "right", "top", "bottom"])
    p.add_argument("--curve-points", type=int, default=None)
    p.add_argument("--format", default="text", choices=["text", "json"])
    _add_preset_dir_flag(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("fit", help="fit model coefficients from a tap log")
    p.add_argument("--log", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--name", default="fitted")
    p.add_argument("--device", default="")
    _add_geometry_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="generate a synthetic tap log")
    p.add_argument("--preset", required=True, help="truth coefficients")
    p.add_argument("--out", required=True)
    p.add_argument("--design", default=None, help="JSON design document")
    p.add_argument("--margins-mm", default=None, help="comma-separated margins")
    p.add_argument("--sizes-mm", default=None, help="comma-separated sizes")
    p.add_argument("--participants", type=int, default=None)
    p.add_argument("--sets", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--edge-side", default=None, choices=["negative_side", "positive_side"])
    p.add_argument("--outlier-rate", type=float, default=None)
    p.add_argument("--participant-mu-sd", type=float, default=None)
    _add_preset_dir_flag(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="score a preset against a tap log")
    p.add_argument("--log", required=True)
    p.add_argument("--preset", required=True)
    p.add_argument("--model", default="both", choices=["skewed", "gaussian", "both"])
    p.add_argument("--out", default=None)
    _add_geometry_flags(p)
    _add_preset_dir_flag(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("plot", help="render report datasets and figures")
    p.add_argument("--log", required=True)
    p.add_argument("--preset", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--image-format", default="svg", choices=["svg", "png"])
    p.add_argument("--refit", action="store_true", help="refit coefficients from the log instead of using the preset")
    _add_geometry_flags(p)
    _add_preset_dir_flag(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("serve", help="run the JSON prediction service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8800)
    _add_preset_dir_flag(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if getattr(args, "size_mm", None) is not None and args.size_mm <= 0:
        print("error: --size-mm must be positive", file=sys.stderr)
        return 2
    if getattr(args, "margin_mm", None) is not None and args.margin_mm < 0:
        print("error: --margin-mm must be >= 0", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except PresetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except EdgeTapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
