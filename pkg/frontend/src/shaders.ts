/** GLSL sources for the panorama sampling pipeline (WebGL2). */

export const vertexShaderSource = `#version 300 es
in vec2 a_position;
out vec2 v_xy;

void main() {
  // Fullscreen triangle; v_xy is the normalized image position with
  // X left-to-right and Y top-to-bottom.
  v_xy = vec2((a_position.x + 1.0) * 0.5, (1.0 - a_position.y) * 0.5);
  gl_Position = vec4(a_position, 0.0, 1.0);
}
`;

export const fragmentShaderSource = `#version 300 es
precision highp float;

const float PI = 3.141592653589793;
const float AXIS_EPS = 1e-9;

uniform sampler2D u_panorama;
uniform vec3 u_pos;
uniform vec3 u_dir;
uniform vec3 u_up;
uniform vec3 u_left;
uniform float u_tanLeft;
uniform float u_tanRight;
uniform float u_tanHalfFovy;
uniform int u_surface;   // 0 sphere, 1 cylinder
uniform int u_debugUv;   // 1: emit packed UV instead of color

in vec2 v_xy;
out vec4 fragColor;

vec2 sampleUv(vec2 xy) {
  // Ray through the image plane; horizontal term interpolates in tangent
  // space between the (possibly skewed) frustum edges.
  float h = (1.0 - xy.x) * u_tanLeft - xy.x * u_tanRight;
  float v = (1.0 - 2.0 * xy.y) * u_tanHalfFovy;
  vec3 ray = normalize(u_dir + u_left * h + u_up * v);

  vec3 hit;
  if (u_surface == 0) {
    float b = 2.0 * dot(u_pos, ray);
    float c = dot(u_pos, u_pos) - 1.0;
    float t = (-b + sqrt(b * b - 4.0 * c)) * 0.5;
    hit = u_pos + t * ray;
  } else {
    float a = ray.x * ray.x + ray.y * ray.y;
    if (a < AXIS_EPS) {
      return vec2(0.0, ray.z > 0.0 ? 0.0 : 1.0);
    }
    float b = 2.0 * (u_pos.x * ray.x + u_pos.y * ray.y);
    float c = u_pos.x * u_pos.x + u_pos.y * u_pos.y - 1.0;
    float t = (-b + sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
    hit = u_pos + t * ray;
  }

  float theta = acos(clamp(hit.z / length(hit), -1.0, 1.0));
  float phi = atan(hit.y, hit.x);
  if (phi < 0.0) phi += 2.0 * PI;
  return vec2(phi / (2.0 * PI), theta / PI);
}

// 16-bit channel-pair packing so UV probes survive 8-bit readback.
vec2 pack16(float x) {
  float v = clamp(x, 0.0, 1.0) * 65535.0;
  return vec2(floor(v / 256.0), floor(mod(v, 256.0))) / 255.0;
}

void main() {
  vec2 uv = sampleUv(v_xy);
  if (u_debugUv == 1) {
    fragColor = vec4(pack16(uv.x), pack16(uv.y));
  } else {
    fragColor = vec4(texture(u_panorama, uv).rgb, 1.0);
  }
}
`;
