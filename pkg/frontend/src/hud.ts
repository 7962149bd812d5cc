/** HUD text: pose, dolly numbers, and self-test results. */

import type { ViewerState } from "./state.js";
import type { ProbeReport } from "./viewer.js";

const f = (x: number, digits = 3) => x.toFixed(digits);

export function hudText(state: ViewerState, probe: ProbeReport | null): string {
  const lines = [
    `pos (${f(state.pos[0])}, ${f(state.pos[1])}, ${f(state.pos[2])})  ` +
      `yaw ${f(state.yawDeg, 1)}  pitch ${f(state.pitchDeg, 1)}  fovx ${f(state.fovxDeg, 1)}`,
    `surface [1/2]: ${state.surface}   dolly [3/4/5]: ${state.dolly}` +
      (state.fallback ? "   (boundary down, unadjusted)" : ""),
  ];
  if (state.dolly !== "none" && state.solution && !state.fallback) {
    const s = state.solution;
    lines.push(
      `t ${s.t.toExponential(3)}  distortion ${s.d_original.toExponential(3)}` +
        ` -> ${s.d_adjusted.toExponential(3)}`,
    );
  }
  if (probe) {
    lines.push(
      `self-test [t]: ${probe.pass ? "PASS" : "FAIL"}  ` +
        `uv err ${probe.maxUvError.toExponential(2)}  ` +
        `color err ${f(probe.maxChannelError, 1)}/255`,
    );
  }
  lines.push("move WASD/arrows + QE, drag to look, wheel zoom");
  return lines.join("\n");
}
