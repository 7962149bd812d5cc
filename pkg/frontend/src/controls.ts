/**
 * Input bindings: WASD/arrows translate in the horizontal plane, Q/E move
 * vertically, mouse drag yaws/pitches, the wheel zooms, 1/2 select the
 * surface, 3/4/5 the dolly mode.
 */

import {
  MoveIntent,
  ViewerState,
  moveCamera,
  rotateCamera,
  zoomCamera,
} from "./state.js";

export interface InputTracker {
  keys: Set<string>;
  consumeWheel(): number;
  consumeDrag(): { dx: number; dy: number };
}

export function moveIntentFromKeys(keys: Set<string>): MoveIntent {
  const held = (k: string) => (keys.has(k) ? 1 : 0);
  return {
    forward: held("w") + held("arrowup") - held("s") - held("arrowdown"),
    leftward: held("a") + held("arrowleft") - held("d") - held("arrowright"),
    upward: held("q") - held("e"),
  };
}

/** Mode keys act on key-down edges rather than per-frame polling. */
export function applyModeKey(state: ViewerState, key: string): boolean {
  switch (key) {
    case "1":
      state.surface = "sphere";
      return true;
    case "2":
      state.surface = "cylinder";
      return true;
    case "3":
      state.dolly = "none";
      return true;
    case "4":
      state.dolly = "heuristic";
      return true;
    case "5":
      state.dolly = "optimized";
      return true;
    default:
      return false;
  }
}

/** Per-frame state update from tracked inputs. */
export function applyInputs(state: ViewerState, inputs: InputTracker, dt: number): void {
  moveCamera(state, moveIntentFromKeys(inputs.keys), dt);
  const wheel = inputs.consumeWheel();
  if (wheel !== 0) {
    zoomCamera(state, wheel > 0 ? 2 : -2);
  }
  const { dx, dy } = inputs.consumeDrag();
  if (dx !== 0 || dy !== 0) {
    rotateCamera(state, -dx * 0.2, dy * 0.2);
  }
}

export function bindControls(
  canvas: HTMLCanvasElement,
  state: ViewerState,
  onModeChange: () => void,
): InputTracker {
  const keys = new Set<string>();
  let wheel = 0;
  let dragX = 0;
  let dragY = 0;
  let dragging = false;

  window.addEventListener("keydown", (e) => {
    const key = e.key.toLowerCase();
    if (applyModeKey(state, key)) {
      onModeChange();
      return;
    }
    keys.add(key);
    if (["w", "a", "s", "d", "q", "e", "arrowup", "arrowdown", "arrowleft", "arrowright"].includes(key)) {
      e.preventDefault();
    }
  });
  window.addEventListener("keyup", (e) => keys.delete(e.key.toLowerCase()));
  window.addEventListener("blur", () => keys.clear());

  canvas.addEventListener("wheel", (e) => {
    wheel += Math.sign(e.deltaY);
    e.preventDefault();
  });
  canvas.addEventListener("mousedown", () => {
    dragging = true;
  });
  window.addEventListener("mouseup", () => {
    dragging = false;
  });
  window.addEventListener("mousemove", (e) => {
    if (dragging) {
      dragX += e.movementX;
      dragY += e.movementY;
    }
  });

  return {
    keys,
    consumeWheel() {
      const w = wheel;
      wheel = 0;
      return w;
    },
    consumeDrag() {
      const d = { dx: dragX, dy: dragY };
      dragX = 0;
      dragY = 0;
      return d;
    },
  };
}
