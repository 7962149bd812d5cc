"""Pose-sweep harness: distortion statistics over sampled interior cameras.

Camera positions cover a radially sampled quarter of the y-z plane (the
rest follows by symmetry) and looking directions cover the hemisphere
facing +x, placed on a deterministic Fibonacci spiral so runs reproduce
byte-for-byte.  Each pose is scored with the original, heuristic, and
optimized cameras.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .dollyzoom import (
    DEFAULT_COLS,
    DEFAULT_ROWS,
    DollyMode,
    distortion_value,
    heuristic_offset,
    optimize_offset,
    solution_from_offset,
)
from .geometry import CameraPose, Surface, make_camera

R_MAX = 0.9  # |pos| cap: distortion diverges as the camera nears the surface

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

CSV_HEADER = (
    "pos_x,pos_y,pos_z,dir_x,dir_y,dir_z,d_orig,d_heu,d_opt,"
    "imp_heu,imp_opt_orig,imp_opt_heu,t_heu,t_opt,solve_us"
)


@dataclass(frozen=True)
class SweepConfig:
    n_radii: int = 6
    n_pos_angles: int = 7
    n_dir_samples: int = 64
    surface: Surface = Surface.CYLINDER
    fovx: float = math.radians(90.0)
    aspect: float = 16.0 / 9.0
    rows: int = DEFAULT_ROWS
    cols: int = DEFAULT_COLS
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.n_radii, self.n_pos_angles, self.n_dir_samples) < 1:
            raise ValueError("sample counts must be >= 1")
        if not 0.0 < self.fovx < math.pi:
            raise ValueError("fovx must be in (0, pi)")


@dataclass(frozen=True)
class SweepRecord:
    pos: np.ndarray
    dir: np.ndarray
    d_orig: float
    d_heu: float
    d_opt: float
    t_heu: float
    t_opt: float
    solve_micros: int
    refit_failed: bool = False

    @property
    def imp_heu(self) -> float:
        return self.d_orig - self.d_heu

    @property
    def imp_opt_over_orig(self) -> float:
        return self.d_orig - self.d_opt

    @property
    def imp_opt_over_heu(self) -> float:
        return self.d_heu - self.d_opt


def _hemisphere_directions(n: int, seed: int) -> np.ndarray:
    """n Fibonacci-spiral directions on the half hemisphere x >= 0; the
    seed rotates the spiral about +x."""
    i = np.arange(n)
    x = 1.0 - (i + 0.5) / n
    rho = np.sqrt(1.0 - x * x)
    ang = i * GOLDEN_ANGLE + (seed * GOLDEN_ANGLE) % (2.0 * math.pi)
    return np.stack([x, rho * np.cos(ang), rho * np.sin(ang)], axis=1)


def _up_for(dir: np.ndarray) -> np.ndarray:
    """Projection of +z orthogonal to dir; +x when dir is vertical."""
    for axis in (np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0])):
        up = axis - np.dot(axis, dir) * dir
        if np.linalg.norm(up) > 1e-9:
            return up
    raise AssertionError("unreachable: dir cannot be parallel to both axes")


def sample_poses(cfg: SweepConfig) -> list[CameraPose]:
    """Deterministic pose lattice: positions on the first quadrant of the
    y-z plane crossed with hemisphere looking directions."""
    radii = R_MAX * (np.arange(cfg.n_radii) + 1) / cfg.n_radii
    if cfg.n_pos_angles == 1:
        angles = np.array([0.0])
    else:
        angles = np.linspace(0.0, math.pi / 2.0, cfg.n_pos_angles)
    dirs = _hemisphere_directions(cfg.n_dir_samples, cfg.seed)

    poses = []
    for r in radii:
        for alpha in angles:
            pos = np.array([0.0, r * math.sin(alpha), r * math.cos(alpha)])
            for d in dirs:
                poses.append(make_camera(pos, d, _up_for(d), cfg.fovx, cfg.aspect))
    return poses


def sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """Score every sampled pose with all three camera models.

    Deterministic apart from the solver wall-clock field.  Poses whose
    refit fails are flagged, not dropped.
    """
    records = []
    for pose in sample_poses(cfg):
        d_orig = distortion_value(pose, cfg.surface, cfg.rows, cfg.cols)

        t_heu = heuristic_offset(pose)
        heu = solution_from_offset(
            pose, cfg.surface, t_heu, DollyMode.HEURISTIC, cfg.rows, cfg.cols, d_orig
        )

        t0 = time.perf_counter()
        t_opt = optimize_offset(pose, cfg.surface, cfg.rows, cfg.cols)
        solve_micros = int(round((time.perf_counter() - t0) * 1e6))
        opt = solution_from_offset(
            pose, cfg.surface, t_opt, DollyMode.OPTIMIZED, cfg.rows, cfg.cols, d_orig
        )

        records.append(
            SweepRecord(
                pos=pose.pos,
                dir=pose.dir,
                d_orig=d_orig,
                d_heu=heu.d_adjusted,
                d_opt=opt.d_adjusted,
                t_heu=heu.t,
                t_opt=opt.t,
                solve_micros=solve_micros,
                refit_failed=heu.refit_failed or opt.refit_failed,
            )
        )
    return records


def quartiles(values) -> tuple[float, float, float, float, float]:
    """(min, q1, median, q3, max) with linear interpolation between
    closest ranks."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("quartiles of an empty sequence")
    # Degenerate poses score +inf; interpolation against inf warns but
    # yields the correct value.
    with np.errstate(invalid="ignore"):
        q = np.percentile(values, [0, 25, 50, 75, 100])
    return tuple(float(x) for x in q)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def record_to_csv_row(rec: SweepRecord) -> str:
    cols = [
        _fmt(rec.pos[0]),
        _fmt(rec.pos[1]),
        _fmt(rec.pos[2]),
        _fmt(rec.dir[0]),
        _fmt(rec.dir[1]),
        _fmt(rec.dir[2]),
        _fmt(rec.d_orig),
        _fmt(rec.d_heu),
        _fmt(rec.d_opt),
        _fmt(rec.imp_heu),
        _fmt(rec.imp_opt_over_orig),
        _fmt(rec.imp_opt_over_heu),
        _fmt(rec.t_heu),
        _fmt(rec.t_opt),
        str(rec.solve_micros),
    ]
    return ",".join(cols)


def write_csv(records: list[SweepRecord], path, seed: int) -> None:
    """UTF-8 CSV with a seed comment line, the pinned header, and one row
    per record (floats at 17 significant digits)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# seed={seed}\n")
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(record_to_csv_row(rec) + "\n")


def read_csv_columns(path) -> dict[str, np.ndarray]:
    """Read a sweep CSV back as named columns, skipping comment lines."""
    names = CSV_HEADER.split(",")
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line == CSV_HEADER:
                continue
            parts = line.split(",")
            if len(parts) != len(names):
                raise ValueError(f"malformed CSV row: {line!r}")
            rows.append([float(p) for p in parts])
    data = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(names))
    return {name: data[:, k] for k, name in enumerate(names)}
