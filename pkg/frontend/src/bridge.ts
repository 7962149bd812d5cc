/**
 * Boundary to the core: dolly solutions come from the `adjust` command's
 * JSON contract, relayed by the dev server.  Solutions are cached until
 * the pose moves meaningfully; a failing boundary degrades to the
 * unadjusted pose (callers read `fallback`).
 */

export interface DollySolution {
  t: number;
  pos: [number, number, number];
  dir: [number, number, number];
  up: [number, number, number];
  fovx_left: number;
  fovx_right: number;
  fovy: number;
  d_original: number;
  d_adjusted: number;
  mode: "none" | "heuristic" | "optimized";
}

const VEC_KEYS = ["pos", "dir", "up"] as const;
const NUM_KEYS = [
  "t",
  "fovx_left",
  "fovx_right",
  "fovy",
  "d_original",
  "d_adjusted",
] as const;

export function parseDollySolution(payload: unknown): DollySolution {
  if (typeof payload !== "object" || payload === null) {
    throw new Error("dolly solution must be an object");
  }
  const obj = payload as Record<string, unknown>;
  for (const key of NUM_KEYS) {
    if (typeof obj[key] !== "number" || !Number.isFinite(obj[key] as number)) {
      throw new Error(`dolly solution field ${key} must be a finite number`);
    }
  }
  for (const key of VEC_KEYS) {
    const v = obj[key];
    if (
      !Array.isArray(v) ||
      v.length !== 3 ||
      v.some((x) => typeof x !== "number" || !Number.isFinite(x))
    ) {
      throw new Error(`dolly solution field ${key} must be a 3-vector`);
    }
  }
  if (obj.mode !== "none" && obj.mode !== "heuristic" && obj.mode !== "optimized") {
    throw new Error("dolly solution mode must be none|heuristic|optimized");
  }
  return obj as unknown as DollySolution;
}

export interface AdjustQuery {
  pos: [number, number, number];
  yawDeg: number;
  pitchDeg: number;
  rollDeg: number;
  fovxDeg: number;
  aspect: number;
  surface: "sphere" | "cylinder";
  mode: "heuristic" | "optimized";
}

const POS_TOL = 1e-4;
const ANGLE_TOL_DEG = 0.1;

export function sameWithinTolerance(a: AdjustQuery, b: AdjustQuery): boolean {
  const dp = Math.hypot(
    a.pos[0] - b.pos[0],
    a.pos[1] - b.pos[1],
    a.pos[2] - b.pos[2],
  );
  const angleDelta = Math.max(
    Math.abs(a.yawDeg - b.yawDeg),
    Math.abs(a.pitchDeg - b.pitchDeg),
    Math.abs(a.rollDeg - b.rollDeg),
  );
  return (
    dp <= POS_TOL &&
    angleDelta <= ANGLE_TOL_DEG &&
    a.fovxDeg === b.fovxDeg &&
    a.aspect === b.aspect &&
    a.surface === b.surface &&
    a.mode === b.mode
  );
}

export type FetchLike = (url: string) => Promise<{ ok: boolean; json(): Promise<unknown> }>;

export class AdjustClient {
  private lastQuery: AdjustQuery | null = null;
  private lastSolution: DollySolution | null = null;
  private inFlight = false;

  constructor(private fetchFn: FetchLike) {}

  cached(query: AdjustQuery): DollySolution | null {
    if (this.lastQuery && this.lastSolution && sameWithinTolerance(query, this.lastQuery)) {
      return this.lastSolution;
    }
    return null;
  }

  get busy(): boolean {
    return this.inFlight;
  }

  /** Resolve a solution for the query, hitting the boundary only when the
   * cache misses.  Returns null on boundary failure. */
  async request(query: AdjustQuery): Promise<DollySolution | null> {
    const hit = this.cached(query);
    if (hit) return hit;
    if (this.inFlight) return null;
    this.inFlight = true;
    try {
      const params = new URLSearchParams({
        pos: query.pos.join(","),
        yaw: String(query.yawDeg),
        pitch: String(query.pitchDeg),
        roll: String(query.rollDeg),
        fovx: String(query.fovxDeg),
        aspect: String(query.aspect),
        surface: query.surface,
        mode: query.mode,
      });
      const res = await this.fetchFn(`/adjust?${params.toString()}`);
      if (!res.ok) return null;
      const solution = parseDollySolution(await res.json());
      this.lastQuery = { ...query, pos: [...query.pos] };
      this.lastSolution = solution;
      return solution;
    } catch {
      return null;
    } finally {
      this.inFlight = false;
    }
  }
}
