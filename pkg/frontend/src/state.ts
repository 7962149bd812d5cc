/**
 * Viewer state and the pure update rules the input handlers drive.
 * Everything here is DOM-free so the movement/clamping logic is unit
 * testable.
 */

import {
  Pose,
  SurfaceMode,
  Vec3,
  makeCamera,
  norm,
  orientationFromAngles,
  scale,
} from "./math.js";
import type { DollySolution } from "./bridge.js";

export type DollyModeName = "none" | "heuristic" | "optimized";

export const POSITION_LIMIT = 0.9;

export interface ViewerState {
  pos: Vec3;
  yawDeg: number;
  pitchDeg: number;
  rollDeg: number;
  fovxDeg: number;
  surface: SurfaceMode;
  dolly: DollyModeName;
  solution: DollySolution | null;
  fallback: boolean;
}

export function initialState(): ViewerState {
  return {
    pos: [0, 0, 0],
    yawDeg: 0,
    pitchDeg: 0,
    rollDeg: 0,
    fovxDeg: 90,
    surface: "cylinder",
    dolly: "none",
    solution: null,
    fallback: false,
  };
}

export function clampPosition(p: Vec3): Vec3 {
  const r = norm(p);
  return r > POSITION_LIMIT ? scale(p, POSITION_LIMIT / r) : p;
}

export interface MoveIntent {
  forward: number; // +1 W / -1 S
  leftward: number; // +1 A / -1 D
  upward: number; // +1 Q / -1 E
}

/** Translate in the horizontal plane along the view direction (vertical
 * motion only through the explicit up intent), clamped to the limit. */
export function moveCamera(state: ViewerState, intent: MoveIntent, dt: number): void {
  const { dir, up } = currentOrientation(state);
  const left = [
    up[1] * dir[2] - up[2] * dir[1],
    up[2] * dir[0] - up[0] * dir[2],
    up[0] * dir[1] - up[1] * dir[0],
  ] as Vec3;
  const flat = (v: Vec3): Vec3 => {
    const h: Vec3 = [v[0], v[1], 0];
    const n = norm(h);
    return n > 1e-9 ? scale(h, 1 / n) : [0, 0, 0];
  };
  const speed = 0.5 * dt;
  const f = flat(dir);
  const l = flat(left);
  const next: Vec3 = [
    state.pos[0] + speed * (intent.forward * f[0] + intent.leftward * l[0]),
    state.pos[1] + speed * (intent.forward * f[1] + intent.leftward * l[1]),
    state.pos[2] + speed * intent.upward,
  ];
  state.pos = clampPosition(next);
}

export function rotateCamera(state: ViewerState, dyawDeg: number, dpitchDeg: number): void {
  state.yawDeg = (state.yawDeg + dyawDeg) % 360;
  state.pitchDeg = Math.max(-89, Math.min(89, state.pitchDeg + dpitchDeg));
}

export function zoomCamera(state: ViewerState, dfovDeg: number): void {
  state.fovxDeg = Math.max(20, Math.min(160, state.fovxDeg + dfovDeg));
}

export function currentOrientation(state: ViewerState): { dir: Vec3; up: Vec3 } {
  const rad = Math.PI / 180;
  return orientationFromAngles(
    state.yawDeg * rad,
    state.pitchDeg * rad,
    state.rollDeg * rad,
  );
}

/** Camera pose from the raw state (no dolly adjustment). */
export function rawPose(state: ViewerState, aspect: number): Pose {
  const { dir, up } = currentOrientation(state);
  return makeCamera(state.pos, dir, up, (state.fovxDeg * Math.PI) / 180, aspect);
}

/** Pose the renderer should use this frame: the cached dolly solution
 * when one applies, the raw pose otherwise. */
export function effectivePose(state: ViewerState, aspect: number): Pose {
  if (state.dolly !== "none" && state.solution && !state.fallback) {
    const s = state.solution;
    return {
      pos: [...s.pos] as Vec3,
      dir: [...s.dir] as Vec3,
      up: [...s.up] as Vec3,
      left: [
        s.up[1] * s.dir[2] - s.up[2] * s.dir[1],
        s.up[2] * s.dir[0] - s.up[0] * s.dir[2],
        s.up[0] * s.dir[1] - s.up[1] * s.dir[0],
      ],
      fovxLeft: s.fovx_left,
      fovxRight: s.fovx_right,
      fovy: s.fovy,
      aspect,
    };
  }
  return rawPose(state, aspect);
}
