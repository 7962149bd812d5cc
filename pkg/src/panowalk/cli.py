"""Command-line front end: render, adjust, sweep, and stats.

Exit codes: 0 success, 2 flag validation, 3 I/O failure, 4 numeric
failure.  Machine-readable results go to stdout as single JSON lines.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .dollyzoom import DEFAULT_COLS, DEFAULT_ROWS, DollyMode, adjust_camera
from .errors import PanowalkError, PoseOutsideSurface
from .evaluation import (
    SweepConfig,
    quartiles,
    read_csv_columns,
    sweep,
    write_csv,
)
from .geometry import CameraPose, Surface, make_camera
from .panorama import load_panorama, write_image
from .projector import RenderRequest, render

EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _parse_vec3(text: str, flag: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise CliError(f"{flag} expects x,y,z, got {text!r}", EXIT_VALIDATION)
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise CliError(f"{flag} expects numbers, got {text!r}", EXIT_VALIDATION)


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        w, h = int(w), int(h)
    except ValueError:
        raise CliError(f"--size expects WxH, got {text!r}", EXIT_VALIDATION)
    if w < 1 or h < 1:
        raise CliError("--size must be at least 1x1", EXIT_VALIDATION)
    return w, h


def _rotate(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation of v about a unit axis."""
    c, s = math.cos(angle), math.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1.0 - c)


def orientation_from_angles(yaw: float, pitch: float, roll: float):
    """dir/up from Euler angles in radians.

    Starting at dir = +x, up = +z: yaw rotates about +z, pitch about the
    camera's left axis (positive tilts up), roll about the looking
    direction.
    """
    z = np.array([0.0, 0.0, 1.0])
    dir = _rotate(np.array([1.0, 0.0, 0.0]), z, yaw)
    left = _rotate(np.array([0.0, 1.0, 0.0]), z, yaw)
    up = z
    dir = _rotate(dir, left, -pitch)
    up = _rotate(up, left, -pitch)
    up = _rotate(up, dir, roll)
    return dir, up


def _pose_from_args(args, aspect: float) -> CameraPose:
    pos = _parse_vec3(args.pos, "--pos")
    if args.dir is not None:
        dir = _parse_vec3(args.dir, "--dir")
        up = _parse_vec3(args.up, "--up") if args.up else np.array([0.0, 0.0, 1.0])
    else:
        dir, up = orientation_from_angles(
            math.radians(args.yaw), math.radians(args.pitch), math.radians(args.roll)
        )
    fovx = math.radians(args.fovx)
    if not 0.0 < fovx < math.pi:
        raise CliError("--fovx must be in (0, 180) degrees", EXIT_VALIDATION)
    try:
        return make_camera(pos, dir, up, fovx, aspect)
    except PoseOutsideSurface:
        raise CliError("position outside unit surface", EXIT_VALIDATION)
    except PanowalkError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)


def _solution_json(sol) -> str:
    pose = sol.adjusted_pose
    payload = {
        "t": sol.t,
        "pos": [float(x) for x in pose.pos],
        "dir": [float(x) for x in pose.dir],
        "up": [float(x) for x in pose.up],
        "fovx_left": pose.fovx_left,
        "fovx_right": pose.fovx_right,
        "fovy": pose.fovy,
        "d_original": sol.d_original,
        "d_adjusted": sol.d_adjusted,
        "mode": sol.mode.value,
    }
    if sol.refit_failed:
        payload["refit_failed"] = True
    return json.dumps(payload)


def _add_pose_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pos", required=True, help="camera position x,y,z")
    p.add_argument("--dir", help="looking direction x,y,z (overrides angles)")
    p.add_argument("--up", help="up vector x,y,z (with --dir)")
    p.add_argument("--yaw", type=float, default=0.0, help="yaw in degrees about +z")
    p.add_argument("--pitch", type=float, default=0.0, help="pitch in degrees")
    p.add_argument("--roll", type=float, default=0.0, help="roll in degrees")
    p.add_argument("--fovx", type=float, default=90.0, help="horizontal FOV, degrees")
    p.add_argument(
        "--surface",
        choices=["sphere", "cylinder"],
        default="cylinder",
        help="projection surface",
    )


def cmd_render(args) -> int:
    w, h = _parse_size(args.size)
    pose = _pose_from_args(args, aspect=w / h)
    surface = Surface(args.surface)
    mode = DollyMode(args.dolly)

    try:
        pano = load_panorama(args.pano)
    except OSError as exc:
        raise CliError(f"cannot read panorama: {exc}", EXIT_IO)
    except PanowalkError as exc:
        raise CliError(str(exc), EXIT_IO)

    try:
        sol = adjust_camera(pose, surface, mode, DEFAULT_ROWS, DEFAULT_COLS)
        req = RenderRequest(
            pose=sol.adjusted_pose,
            surface=surface,
            dolly_mode=DollyMode.NONE,
            out_width=w,
            out_height=h,
        )
        image = render(req, pano)
    except PanowalkError as exc:
        raise CliError(str(exc), EXIT_NUMERIC)

    try:
        write_image(image, args.out)
    except OSError as exc:
        raise CliError(f"cannot write image: {exc}", EXIT_IO)

    print(
        json.dumps(
            {
                "t": sol.t,
                "d_original": sol.d_original,
                "d_adjusted": sol.d_adjusted,
                "mode": sol.mode.value,
                "out": str(args.out),
            }
        )
    )
    return 0


def cmd_adjust(args) -> int:
    # Aspect only shapes the distortion metric here; no image is produced.
    pose = _pose_from_args(args, aspect=args.aspect)
    try:
        sol = adjust_camera(
            pose, Surface(args.surface), DollyMode(args.mode), args.rows, args.cols
        )
    except PanowalkError as exc:
        raise CliError(str(exc), EXIT_NUMERIC)
    print(_solution_json(sol))
    return 0


def cmd_sweep(args) -> int:
    cfg = SweepConfig(
        n_radii=args.n_radii,
        n_pos_angles=args.n_pos_angles,
        n_dir_samples=args.n_dir_samples,
        surface=Surface(args.surface),
        fovx=math.radians(args.fovx),
        aspect=args.aspect,
        rows=args.rows,
        cols=args.cols,
        seed=args.seed,
    )
    try:
        records = sweep(cfg)
    except PanowalkError as exc:
        raise CliError(str(exc), EXIT_NUMERIC)
    try:
        write_csv(records, args.out, cfg.seed)
    except OSError as exc:
        raise CliError(f"cannot write CSV: {exc}", EXIT_IO)
    print(json.dumps({"poses": len(records), "out": str(args.out)}))
    return 0


def cmd_stats(args) -> int:
    try:
        cols = read_csv_columns(args.infile)
    except OSError as exc:
        raise CliError(f"cannot read CSV: {exc}", EXIT_IO)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    if cols["d_orig"].size == 0:
        raise CliError("CSV contains no data rows", EXIT_VALIDATION)

    table = {
        "ori": quartiles(cols["d_orig"]),
        "heu": quartiles(cols["d_heu"]),
        "opt": quartiles(cols["d_opt"]),
    }
    header = f"{'method':<8}" + "".join(f"{q:>14}" for q in ("q0", "q1", "q2", "q3", "q4"))
    print(header)
    for name, qs in table.items():
        print(f"{name:<8}" + "".join(f"{v:>14.5g}" for v in qs))
    print(json.dumps({k: list(v) for k, v in table.items()}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="panowalk",
        description="Off-center perspective views of equirectangular panoramas",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render a perspective view to PNG")
    _add_pose_flags(p)
    p.add_argument("--pano", required=True, help="input panorama (PNG/JPEG)")
    p.add_argument("--size", default="1280x720", help="output size WxH")
    p.add_argument(
        "--dolly",
        choices=["none", "heuristic", "optimized"],
        default="none",
        help="dolly-zoom adjustment mode",
    )
    p.add_argument("--out", required=True, help="output PNG path")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("adjust", help="solve a dolly adjustment, print JSON")
    _add_pose_flags(p)
    p.add_argument("--mode", choices=["heuristic", "optimized"], required=True)
    p.add_argument("--aspect", type=float, default=16.0 / 9.0)
    p.add_argument("--rows", type=int, default=DEFAULT_ROWS)
    p.add_argument("--cols", type=int, default=DEFAULT_COLS)
    p.set_defaults(func=cmd_adjust)

    p = sub.add_parser("sweep", help="run the pose sweep, write CSV")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--n-radii", type=int, default=6)
    p.add_argument("--n-pos-angles", type=int, default=7)
    p.add_argument("--n-dir-samples", type=int, default=64)
    p.add_argument("--surface", choices=["sphere", "cylinder"], default="cylinder")
    p.add_argument("--fovx", type=float, default=90.0)
    p.add_argument("--aspect", type=float, default=16.0 / 9.0)
    p.add_argument("--rows", type=int, default=DEFAULT_ROWS)
    p.add_argument("--cols", type=int, default=DEFAULT_COLS)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("stats", help="print quartile table for a sweep CSV")
    p.add_argument("--in", dest="infile", required=True, help="input CSV path")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
