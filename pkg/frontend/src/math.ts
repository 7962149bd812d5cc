/**
 * CPU mirror of the core sampling math, used for probe validation and to
 * build camera poses from viewer state.  Must stay in lockstep with the
 * Python package (the test suite checks parity through the CLI boundary).
 *
 * Conventions: unit sphere / unit upright cylinder centered at the origin,
 * +z up, +x at azimuth 0; texture coordinates u = azimuth / 2pi,
 * v = zenith / pi.
 */

export type Vec3 = [number, number, number];

export type SurfaceMode = "sphere" | "cylinder";

export interface Pose {
  pos: Vec3;
  dir: Vec3;
  up: Vec3;
  left: Vec3;
  fovxLeft: number;
  fovxRight: number;
  fovy: number;
  aspect: number;
}

const AXIS_EPS = 1e-9;

export function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

export function norm(a: Vec3): number {
  return Math.sqrt(dot(a, a));
}

export function scale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

export function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function normalize(a: Vec3): Vec3 {
  return scale(a, 1.0 / norm(a));
}

/** Symmetric-frustum pose; up re-orthogonalized, left = up x dir. */
export function makeCamera(
  pos: Vec3,
  dir: Vec3,
  up: Vec3,
  fovx: number,
  aspect: number,
): Pose {
  const d = normalize(dir);
  const u = normalize(sub(up, scale(d, dot(up, d))));
  const half = fovx / 2;
  return {
    pos: [...pos],
    dir: d,
    up: u,
    left: cross(u, d),
    fovxLeft: half,
    fovxRight: half,
    fovy: 2 * Math.atan(Math.tan(half) / aspect),
    aspect,
  };
}

/**
 * dir/up from Euler angles in radians: yaw about +z from dir = +x, pitch
 * about the camera's left axis (positive looks up), roll about the
 * looking direction (right-hand rule).  Mirrors the CLI convention.
 */
export function orientationFromAngles(
  yaw: number,
  pitch: number,
  roll: number,
): { dir: Vec3; up: Vec3 } {
  const rotate = (v: Vec3, axis: Vec3, angle: number): Vec3 => {
    const c = Math.cos(angle);
    const s = Math.sin(angle);
    const k = dot(axis, v) * (1 - c);
    const cx = cross(axis, v);
    return [
      v[0] * c + cx[0] * s + axis[0] * k,
      v[1] * c + cx[1] * s + axis[1] * k,
      v[2] * c + cx[2] * s + axis[2] * k,
    ];
  };
  const z: Vec3 = [0, 0, 1];
  let dir = rotate([1, 0, 0], z, yaw);
  const left = rotate([0, 1, 0], z, yaw);
  let up: Vec3 = z;
  dir = rotate(dir, left, -pitch);
  up = rotate(up, left, -pitch);
  up = rotate(up, dir, roll);
  return { dir, up };
}

/** Unit ray through normalized image position (X right, Y down). */
export function pixelRay(pose: Pose, X: number, Y: number): Vec3 {
  const h = (1 - X) * Math.tan(pose.fovxLeft) - X * Math.tan(pose.fovxRight);
  const v = (1 - 2 * Y) * Math.tan(pose.fovy / 2);
  return normalize(
    add(pose.dir, add(scale(pose.left, h), scale(pose.up, v))),
  );
}

/** Panorama (u, v) hit by the ray through (X, Y); axis-parallel cylinder
 * rays resolve to the pole rows. */
export function sampleDirection(
  pose: Pose,
  surface: SurfaceMode,
  X: number,
  Y: number,
): [number, number] {
  const ray = pixelRay(pose, X, Y);
  const P = pose.pos;
  let hit: Vec3;
  if (surface === "sphere") {
    const b = 2 * dot(P, ray);
    const c = dot(P, P) - 1;
    const t = (-b + Math.sqrt(b * b - 4 * c * dot(ray, ray))) / (2 * dot(ray, ray));
    hit = add(P, scale(ray, t));
  } else {
    const a = ray[0] * ray[0] + ray[1] * ray[1];
    if (a < AXIS_EPS) {
      return [0, ray[2] > 0 ? 0 : 1];
    }
    const b = 2 * (P[0] * ray[0] + P[1] * ray[1]);
    const c = P[0] * P[0] + P[1] * P[1] - 1;
    const t = (-b + Math.sqrt(b * b - 4 * a * c)) / (2 * a);
    hit = add(P, scale(ray, t));
  }
  const theta = Math.acos(Math.max(-1, Math.min(1, hit[2] / norm(hit))));
  let phi = Math.atan2(hit[1], hit[0]);
  if (phi < 0) phi += 2 * Math.PI;
  return [phi / (2 * Math.PI), theta / Math.PI];
}

/** Bilinear fetch from RGBA image data with horizontal wrap and vertical
 * clamp, matching the renderer's texel addressing. */
export function sampleBilinear(
  data: Uint8ClampedArray,
  width: number,
  height: number,
  u: number,
  v: number,
): [number, number, number] {
  const x = u * width - 0.5;
  const y = v * height - 0.5;
  const x0 = Math.floor(x);
  const y0 = Math.floor(y);
  const fx = x - x0;
  const fy = y - y0;
  const wrap = (i: number) => ((i % width) + width) % width;
  const clampY = (j: number) => Math.max(0, Math.min(height - 1, j));
  const texel = (i: number, j: number): [number, number, number] => {
    const o = (clampY(j) * width + wrap(i)) * 4;
    return [data[o] / 255, data[o + 1] / 255, data[o + 2] / 255];
  };
  const mix = (
    a: [number, number, number],
    b: [number, number, number],
    w: number,
  ): [number, number, number] => [
    a[0] * (1 - w) + b[0] * w,
    a[1] * (1 - w) + b[1] * w,
    a[2] * (1 - w) + b[2] * w,
  ];
  const top = mix(texel(x0, y0), texel(x0 + 1, y0), fx);
  const bot = mix(texel(x0, y0 + 1), texel(x0 + 1, y0 + 1), fx);
  return mix(top, bot, fy);
}
