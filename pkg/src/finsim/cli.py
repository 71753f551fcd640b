"""Command-line entry point: ``finsim <command> ...``.

Exit codes: 0 success, 2 invalid input or configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from finsim import hydro, svgplot, videometrics
from finsim.config import default_config_path, load_config, resolve_out_dir
from finsim.dynamics import (
    center_of_rotation,
    head_sway,
    simulate,
    sweep_head,
    tail_sweep_length,
    tip_lateral,
    write_trace_csv,
)
from finsim.errors import (
    FinsimError,
    InsufficientOscillationError,
    InvalidInputError,
    NoUniqueMinimumError,
    NumericalDivergenceError,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

DEFAULT_HEAD_LENGTHS = tuple(float(h) for h in np.geomspace(0.07334, 0.880, 8))


def _g(v) -> str:
    return f"{float(v):.17g}"


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _out_dir(cfg, args) -> Path:
    out = resolve_out_dir(cfg, args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    out = _out_dir(cfg, args)
    trace = simulate(cfg.plan, cfg.profile, cfg.duration, cfg.dt)
    csv_path = out / "trace.csv"
    write_trace_csv(trace, csv_path)
    written = [csv_path]

    if cfg.emit_svg and not args.no_svg:
        tip = svgplot.chart(
            [svgplot.Series("tail tip", trace.tip[:, 0], trace.tip[:, 1])],
            "Tail-tip trajectory (world frame)", "x [m]", "y [m]",
        )
        svgplot.write_svg(out / "tip.svg", tip)
        joints = [
            svgplot.Series(f"active (each)", trace.t, np.degrees(trace.active[:, 0])),
        ] + [
            svgplot.Series(f"passive {j}", trace.t, np.degrees(trace.passive[:, j]), right_axis=True)
            for j in range(trace.passive.shape[1])
        ]
        svgplot.write_svg(
            out / "joints.svg",
            svgplot.chart(joints, "Joint angles", "t [s]", "active angle [deg]", "passive angle [deg]"),
        )
        written += [out / "tip.svg", out / "joints.svg"]

    sweep = tail_sweep_length(trace, cfg.transient)
    try:
        beat = videometrics.tailbeat_frequency(tip_lateral(trace, cfg.transient), 1.0 / trace.dt)
        beat_txt = f"{beat:.4f} Hz (drive {cfg.profile.frequency:g} Hz)"
    except InsufficientOscillationError:
        beat_txt = "n/a (no oscillation)"
    print(f"tail sweep length: {sweep:.6f} m")
    print(f"tail-beat frequency: {beat_txt}")
    print(f"head sway: {head_sway(trace, cfg.plan, cfg.transient):.4f} deg")
    print(f"mass ratio: {cfg.plan.mass_ratio:.4f}")
    for p in written:
        print(f"wrote {p}")
    return EXIT_OK


def cmd_sweep_head(args) -> int:
    cfg = load_config(args.config)
    out = _out_dir(cfg, args)
    lengths = args.lengths if args.lengths is not None else list(DEFAULT_HEAD_LENGTHS)
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs < 1:
        raise InvalidInputError("--jobs must be >= 1")
    rows = sweep_head(cfg.plan, lengths, cfg.profile, cfg.duration, cfg.dt, cfg.transient, jobs=jobs)

    csv_path = out / "sweep_head.csv"
    with open(csv_path, "w", newline="\n") as fh:
        fh.write("head_len,mass_ratio,head_sway_deg,fin_to_cor\n")
        for h, r in zip(lengths, rows):
            fh.write(f"{_g(h)},{_g(r.mass_ratio)},{_g(r.head_sway_deg)},{_g(r.fin_to_cor)}\n")
    print("head_len,mass_ratio,head_sway_deg,fin_to_cor")
    for h, r in zip(lengths, rows):
        print(f"{h:.5f},{r.mass_ratio:.4f},{r.head_sway_deg:.4f},{r.fin_to_cor:.5f}")
    print(f"wrote {csv_path}")

    if cfg.emit_svg and not args.no_svg:
        ratio = np.array([r.mass_ratio for r in rows])
        svg = svgplot.chart(
            [
                svgplot.Series("head sway", ratio, [r.head_sway_deg for r in rows],
                               marker="circle", line=False),
                svgplot.Series("caudal fin to centre of rotation", ratio,
                               [r.fin_to_cor for r in rows], marker="cross", line=False,
                               right_axis=True),
            ],
            "Head sway and manoeuvrability vs head mass ratio",
            "head mass ratio [-]", "head sway [deg]", "fin to centre of rotation [m]",
        )
        svgplot.write_svg(out / "sweep_head.svg", svg)
        print(f"wrote {out / 'sweep_head.svg'}")
    return EXIT_OK


def cmd_fin_predict(args) -> int:
    v = hydro.predict_fin_speed(args.v_small, args.area_small, args.area_large)
    print(f"predicted large-fin speed: {v:.6f} m/s")
    print(f"warning: {hydro.FIN_PREDICTION_WARNING}", file=sys.stderr)
    if args.speeds:
        if not args.csv:
            raise InvalidInputError("--speeds needs --csv")
        with open(args.csv, "w", newline="\n") as fh:
            fh.write("v_small,v_large_predicted\n")
            for vs in args.speeds:
                fh.write(f"{_g(vs)},{_g(hydro.predict_fin_speed(vs, args.area_small, args.area_large))}\n")
        print(f"wrote {args.csv}")
    return EXIT_OK


def cmd_analyze_track(args) -> int:
    track = videometrics.read_track_csv(args.track, args.fps, args.ref_len_m, args.camera_angle_deg)
    rep = videometrics.analyze_track(track)
    print(f"traveled distance: {rep.distance_m:.6f} m")
    print(f"interval: {rep.duration_s:.6f} s")
    print(f"speed: {rep.speed:.6f} m/s")
    print(f"tail-beat frequency: {rep.frequency:.6f} Hz")
    print(f"tail sweep (peak-to-peak): {rep.sweep_m:.6f} m")
    print(f"Strouhal number: {rep.strouhal:.6f}")
    print(f"efficiency: {rep.efficiency}")
    return EXIT_OK


def cmd_strouhal(args) -> int:
    st = hydro.strouhal(args.f, args.A, args.U)
    print(f"St = {st:.6f} ({hydro.efficiency_class(st)})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_args(p):
        p.add_argument("config", nargs="?", default=str(default_config_path()),
                       help="run configuration (default: bundled paper_default.cfg)")
        p.add_argument("--out-dir", help="output directory (overrides $FINSIM_OUT_DIR and the config)")
        p.add_argument("--no-svg", action="store_true", help="skip SVG output")

    p = sub.add_parser("simulate", help="simulate the tail chain and write the trace")
    add_run_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep-head", help="head-length sweep of sway and centre of rotation")
    add_run_args(p)
    p.add_argument("--lengths", type=_float_list, help="comma-separated head lengths in m")
    p.add_argument("--jobs", type=int, help="parallel workers (default: CPU count)")
    p.set_defaults(func=cmd_sweep_head)

    p = sub.add_parser("fin-predict", help="large-fin speed from small-fin speed and fin areas")
    p.add_argument("--v-small", type=float, required=True, help="speed with the small fin [m/s]")
    p.add_argument("--area-small", type=float, default=2431.0, help="small fin area (any unit, default 2431 mm^2)")
    p.add_argument("--area-large", type=float, default=4065.0, help="large fin area (same unit, default 4065 mm^2)")
    p.add_argument("--speeds", type=_float_list, help="comma-separated small-fin speeds for the CSV")
    p.add_argument("--csv", help="write predictions for --speeds to this file")
    p.set_defaults(func=cmd_fin_predict)

    p = sub.add_parser("analyze-track", help="speed, tail beat and Strouhal number from a track CSV")
    p.add_argument("track", help="CSV with header t,marker_x_px,marker_y_px,ref_len_px")
    p.add_argument("--ref-len-m", type=float, required=True, help="true length of the calibration segment [m]")
    p.add_argument("--fps", type=float, required=True, help="video frame rate [Hz]")
    p.add_argument("--camera-angle-deg", type=float, default=float("nan"), help="camera angle (metadata only)")
    p.set_defaults(func=cmd_analyze_track)

    p = sub.add_parser("strouhal", help="evaluate St = f*A/U")
    p.add_argument("--f", type=float, required=True, help="tail-beat frequency [Hz]")
    p.add_argument("--A", type=float, required=True, help="peak-to-peak tail sweep [m]")
    p.add_argument("--U", type=float, required=True, help="swimming speed [m/s]")
    p.set_defaults(func=cmd_strouhal)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NumericalDivergenceError, NoUniqueMinimumError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FinsimError as exc:
        cause = getattr(exc, "cause", None)
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(cause, (NumericalDivergenceError, NoUniqueMinimumError)):
            return EXIT_NUMERIC
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
