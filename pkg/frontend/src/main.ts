/** Viewer entry point: boot, panorama loading, and the render loop. */

import { AdjustClient, AdjustQuery } from "./bridge.js";
import { applyInputs, bindControls } from "./controls.js";
import { hudText } from "./hud.js";
import { effectivePose, initialState } from "./state.js";
import { PanoramaData, ProbeReport, Viewer } from "./viewer.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const hud = document.getElementById("hud") as HTMLDivElement;
const overlay = document.getElementById("overlay") as HTMLPreElement;
const fileInput = document.getElementById("pano-file") as HTMLInputElement;

function showOverlay(message: string): void {
  overlay.textContent = message;
  overlay.style.display = "block";
}

function fitCanvas(): void {
  canvas.width = window.innerWidth;
  canvas.height = window.innerHeight;
}

/** Built-in pattern so the viewer works before any panorama is chosen:
 * azimuth stripes with a gradient toward the poles. */
function testPattern(width = 1024, height = 512): PanoramaData {
  const data = new Uint8ClampedArray(width * height * 4);
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const o = (y * width + x) * 4;
      const stripe = Math.floor((x / width) * 24) % 2 === 0 ? 230 : 40;
      data[o] = stripe;
      data[o + 1] = Math.round(255 * (y / height));
      data[o + 2] = 140;
      data[o + 3] = 255;
    }
  }
  return { width, height, data };
}

async function imageToPanorama(source: CanvasImageSource, width: number, height: number): Promise<PanoramaData> {
  const scratch = document.createElement("canvas");
  scratch.width = width;
  scratch.height = height;
  const ctx = scratch.getContext("2d");
  if (!ctx) throw new Error("2d context unavailable");
  ctx.drawImage(source, 0, 0, width, height);
  const img = ctx.getImageData(0, 0, width, height);
  return { width: img.width, height: img.height, data: img.data };
}

async function boot(): Promise<void> {
  fitCanvas();
  const state = initialState();
  let viewer: Viewer;
  try {
    viewer = new Viewer(canvas);
  } catch (err) {
    showOverlay(String(err));
    return;
  }
  viewer.setPanorama(testPattern());

  const src = new URLSearchParams(window.location.search).get("src");
  if (src) {
    const img = new Image();
    img.crossOrigin = "anonymous";
    img.onload = async () => {
      viewer.setPanorama(await imageToPanorama(img, img.naturalWidth, img.naturalHeight));
    };
    img.onerror = () => showOverlay(`cannot load panorama: ${src}`);
    img.src = src;
  }
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    const bitmap = await createImageBitmap(file);
    viewer.setPanorama(await imageToPanorama(bitmap, bitmap.width, bitmap.height));
  });

  const client = new AdjustClient((url) => fetch(url));
  let probe: ProbeReport | null = null;
  const inputs = bindControls(canvas, state, () => {
    state.solution = null; // mode switch invalidates the cached solution
  });
  window.addEventListener("keydown", (e) => {
    if (e.key.toLowerCase() === "t") {
      probe = viewer.probeCheck(
        effectivePose(state, canvas.width / canvas.height),
        state.surface,
      );
    }
  });
  window.addEventListener("resize", fitCanvas);

  let last = performance.now();
  const frame = (now: number): void => {
    const dt = Math.min(0.1, (now - last) / 1000);
    last = now;
    applyInputs(state, inputs, dt);

    if (state.dolly !== "none") {
      const query: AdjustQuery = {
        pos: [...state.pos] as [number, number, number],
        yawDeg: state.yawDeg,
        pitchDeg: state.pitchDeg,
        rollDeg: state.rollDeg,
        fovxDeg: state.fovxDeg,
        aspect: canvas.width / canvas.height,
        surface: state.surface,
        mode: state.dolly,
      };
      const hit = client.cached(query);
      if (hit) {
        state.solution = hit;
        state.fallback = false;
      } else if (!client.busy) {
        // Async solve; the last-known solution keeps rendering until the
        // new one lands (no frame blocking).
        void client.request(query).then((solution) => {
          if (solution) {
            state.solution = solution;
            state.fallback = false;
          } else {
            state.fallback = true;
          }
        });
      }
    }

    viewer.draw(effectivePose(state, canvas.width / canvas.height), state.surface);
    hud.textContent = hudText(state, probe);
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

void boot();
