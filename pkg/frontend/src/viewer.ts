/**
 * WebGL2 renderer: uploads the panorama once, then draws a fullscreen
 * triangle whose fragment shader runs the sampling math per pixel.
 * Includes the probe harness used to validate GPU/CPU parity.
 */

import { Pose, SurfaceMode, sampleBilinear, sampleDirection } from "./math.js";
import { fragmentShaderSource, vertexShaderSource } from "./shaders.js";

export interface PanoramaData {
  width: number;
  height: number;
  data: Uint8ClampedArray; // RGBA rows, top row first
}

export interface ProbeReport {
  maxUvError: number;
  maxChannelError: number;
  okFraction: number;
  pass: boolean;
}

const PROBE_POINTS: Array<[number, number]> = [
  [0.1, 0.1], [0.5, 0.1], [0.9, 0.1],
  [0.1, 0.5], [0.5, 0.5], [0.9, 0.5],
  [0.1, 0.9], [0.5, 0.9], [0.9, 0.9],
];

function compile(gl: WebGL2RenderingContext, type: number, source: string): WebGLShader {
  const shader = gl.createShader(type);
  if (!shader) throw new Error("cannot allocate shader");
  gl.shaderSource(shader, source);
  gl.compileShader(shader);
  if (!gl.getShaderParameter(shader, gl.COMPILE_STATUS)) {
    const log = gl.getShaderInfoLog(shader) ?? "unknown error";
    gl.deleteShader(shader);
    throw new Error(`shader compile failed:\n${log}`);
  }
  return shader;
}

export class Viewer {
  private gl: WebGL2RenderingContext;
  private uniforms: Record<string, WebGLUniformLocation | null> = {};
  private panorama: PanoramaData | null = null;

  constructor(private canvas: HTMLCanvasElement) {
    const gl = canvas.getContext("webgl2", { preserveDrawingBuffer: true });
    if (!gl) throw new Error("WebGL2 is not available");
    this.gl = gl;

    const program = gl.createProgram();
    if (!program) throw new Error("cannot allocate program");
    gl.attachShader(program, compile(gl, gl.VERTEX_SHADER, vertexShaderSource));
    gl.attachShader(program, compile(gl, gl.FRAGMENT_SHADER, fragmentShaderSource));
    gl.linkProgram(program);
    if (!gl.getProgramParameter(program, gl.LINK_STATUS)) {
      throw new Error(`program link failed:\n${gl.getProgramInfoLog(program)}`);
    }
    gl.useProgram(program);

    for (const name of [
      "u_panorama", "u_pos", "u_dir", "u_up", "u_left",
      "u_tanLeft", "u_tanRight", "u_tanHalfFovy", "u_surface", "u_debugUv",
    ]) {
      this.uniforms[name] = gl.getUniformLocation(program, name);
    }

    const quad = gl.createBuffer();
    gl.bindBuffer(gl.ARRAY_BUFFER, quad);
    gl.bufferData(
      gl.ARRAY_BUFFER,
      new Float32Array([-1, -1, 3, -1, -1, 3]),
      gl.STATIC_DRAW,
    );
    const loc = gl.getAttribLocation(program, "a_position");
    gl.enableVertexAttribArray(loc);
    gl.vertexAttribPointer(loc, 2, gl.FLOAT, false, 0, 0);
  }

  setPanorama(pano: PanoramaData): void {
    const gl = this.gl;
    this.panorama = pano;
    const tex = gl.createTexture();
    gl.activeTexture(gl.TEXTURE0);
    gl.bindTexture(gl.TEXTURE_2D, tex);
    gl.pixelStorei(gl.UNPACK_FLIP_Y_WEBGL, false);
    gl.texImage2D(
      gl.TEXTURE_2D, 0, gl.RGBA, pano.width, pano.height, 0,
      gl.RGBA, gl.UNSIGNED_BYTE, new Uint8Array(pano.data.buffer),
    );
    // Horizontal wrap keeps the seam continuous; vertical clamp pins the
    // pole rows, matching the core's sampling semantics.
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_WRAP_S, gl.REPEAT);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_WRAP_T, gl.CLAMP_TO_EDGE);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_MIN_FILTER, gl.LINEAR);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_MAG_FILTER, gl.LINEAR);
    gl.uniform1i(this.uniforms.u_panorama, 0);
  }

  draw(pose: Pose, surface: SurfaceMode, debugUv = false): void {
    const gl = this.gl;
    gl.viewport(0, 0, this.canvas.width, this.canvas.height);
    gl.uniform3fv(this.uniforms.u_pos, pose.pos);
    gl.uniform3fv(this.uniforms.u_dir, pose.dir);
    gl.uniform3fv(this.uniforms.u_up, pose.up);
    gl.uniform3fv(this.uniforms.u_left, pose.left);
    gl.uniform1f(this.uniforms.u_tanLeft, Math.tan(pose.fovxLeft));
    gl.uniform1f(this.uniforms.u_tanRight, Math.tan(pose.fovxRight));
    gl.uniform1f(this.uniforms.u_tanHalfFovy, Math.tan(pose.fovy / 2));
    gl.uniform1i(this.uniforms.u_surface, surface === "sphere" ? 0 : 1);
    gl.uniform1i(this.uniforms.u_debugUv, debugUv ? 1 : 0);
    gl.drawArrays(gl.TRIANGLES, 0, 3);
  }

  /**
   * GPU/CPU parity self-test: reads back the 9 probe pixels in both the
   * packed-UV debug pass and the normal color pass and compares them
   * against the CPU mirror (UV tolerance 1e-4, color 2/255 on >= 95%).
   */
  probeCheck(pose: Pose, surface: SurfaceMode): ProbeReport {
    const gl = this.gl;
    const w = this.canvas.width;
    const h = this.canvas.height;
    const px = new Uint8Array(4);

    // readPixels addresses rows bottom-up; probes are in top-down image
    // space, so flip the row and compare at the shaded pixel's center.
    const windowRow = (gyTop: number) => h - 1 - gyTop;

    this.draw(pose, surface, true);
    let maxUvError = 0;
    for (const [X, Y] of PROBE_POINTS) {
      const gx = Math.min(w - 1, Math.floor(X * w));
      const gy = Math.min(h - 1, Math.floor(Y * h));
      gl.readPixels(gx, windowRow(gy), 1, 1, gl.RGBA, gl.UNSIGNED_BYTE, px);
      const u = (px[0] * 256 + px[1]) / 65535;
      const v = (px[2] * 256 + px[3]) / 65535;
      const [cu, cv] = sampleDirection(pose, surface, (gx + 0.5) / w, (gy + 0.5) / h);
      const du = Math.min(Math.abs(u - cu), 1 - Math.abs(u - cu)); // u wraps
      maxUvError = Math.max(maxUvError, du, Math.abs(v - cv));
    }

    let maxChannelError = 0;
    let okCount = 0;
    if (this.panorama) {
      this.draw(pose, surface, false);
      for (const [X, Y] of PROBE_POINTS) {
        const gx = Math.min(w - 1, Math.floor(X * w));
        const gy = Math.min(h - 1, Math.floor(Y * h));
        gl.readPixels(gx, windowRow(gy), 1, 1, gl.RGBA, gl.UNSIGNED_BYTE, px);
        const [cu, cv] = sampleDirection(pose, surface, (gx + 0.5) / w, (gy + 0.5) / h);
        const rgb = sampleBilinear(
          this.panorama.data, this.panorama.width, this.panorama.height, cu, cv,
        );
        const err = Math.max(
          Math.abs(px[0] - rgb[0] * 255),
          Math.abs(px[1] - rgb[1] * 255),
          Math.abs(px[2] - rgb[2] * 255),
        );
        maxChannelError = Math.max(maxChannelError, err);
        if (err <= 2) okCount += 1;
      }
    }

    const okFraction = this.panorama ? okCount / PROBE_POINTS.length : 1;
    return {
      maxUvError,
      maxChannelError,
      okFraction,
      pass: maxUvError < 1e-4 && okFraction >= 0.95,
    };
  }
}
