/** WebGL equirectangular renderer.
 *
 * A fullscreen quad; the fragment shader turns each pixel into a view ray,
 * rotates it by the current yaw/pitch and samples the panorama texture with
 * the standard equirectangular mapping (image center = yaw 0, top = zenith).
 * This is the only module that touches WebGL; everything above it deals in
 * ViewerState.
 */

import { DEG2RAD } from "./geometry.js";
import { View } from "./state.js";

const VERTEX_SRC = `
attribute vec2 position;
varying vec2 vNdc;
void main() {
  vNdc = position;
  gl_Position = vec4(position, 0.0, 1.0);
}
`;

const FRAGMENT_SRC = `
precision highp float;

const float PI = 3.141592653589793;

uniform sampler2D uTexture;
uniform float uYaw;       // radians
uniform float uPitch;     // radians
uniform float uTanHalfFov;
uniform float uAspect;    // width / height
varying vec2 vNdc;

void main() {
  // View ray in camera coordinates: x right, y down, z forward.
  vec3 ray = normalize(vec3(
    vNdc.x * uAspect * uTanHalfFov,
    -vNdc.y * uTanHalfFov,
    1.0
  ));

  // view -> panorama frame: undo pitch (about x), then yaw (about y)
  float cp = cos(uPitch), sp = sin(uPitch);
  vec3 p = vec3(ray.x, cp * ray.y - sp * ray.z, sp * ray.y + cp * ray.z);
  float cy = cos(uYaw), sy = sin(uYaw);
  vec3 d = vec3(cy * p.x + sy * p.z, p.y, -sy * p.x + cy * p.z);

  float yaw = atan(d.x, d.z);
  float v = 0.5 + asin(clamp(d.y, -1.0, 1.0)) / PI;
  vec2 uv = vec2(0.5 + yaw / (2.0 * PI), v);
  gl_FragColor = texture2D(uTexture, uv);
}
`;

function compile(gl: WebGLRenderingContext, type: number, source: string): WebGLShader {
  const shader = gl.createShader(type);
  if (!shader) throw new Error("createShader failed");
  gl.shaderSource(shader, source);
  gl.compileShader(shader);
  if (!gl.getShaderParameter(shader, gl.COMPILE_STATUS)) {
    throw new Error(`shader compile failed: ${gl.getShaderInfoLog(shader)}`);
  }
  return shader;
}

export class PanoRenderer {
  private gl: WebGLRenderingContext;
  private uYaw: WebGLUniformLocation;
  private uPitch: WebGLUniformLocation;
  private uTanHalfFov: WebGLUniformLocation;
  private uAspect: WebGLUniformLocation;
  private texture: WebGLTexture;
  private hasImage = false;

  constructor(private canvas: HTMLCanvasElement) {
    const gl = canvas.getContext("webgl");
    if (!gl) throw new Error("WebGL is not available");
    this.gl = gl;

    const program = gl.createProgram();
    if (!program) throw new Error("createProgram failed");
    gl.attachShader(program, compile(gl, gl.VERTEX_SHADER, VERTEX_SRC));
    gl.attachShader(program, compile(gl, gl.FRAGMENT_SHADER, FRAGMENT_SRC));
    gl.linkProgram(program);
    if (!gl.getProgramParameter(program, gl.LINK_STATUS)) {
      throw new Error(`program link failed: ${gl.getProgramInfoLog(program)}`);
    }
    gl.useProgram(program);

    const quad = gl.createBuffer();
    gl.bindBuffer(gl.ARRAY_BUFFER, quad);
    gl.bufferData(
      gl.ARRAY_BUFFER,
      new Float32Array([-1, -1, 1, -1, -1, 1, 1, 1]),
      gl.STATIC_DRAW,
    );
    const position = gl.getAttribLocation(program, "position");
    gl.enableVertexAttribArray(position);
    gl.vertexAttribPointer(position, 2, gl.FLOAT, false, 0, 0);

    this.uYaw = this.uniform(program, "uYaw");
    this.uPitch = this.uniform(program, "uPitch");
    this.uTanHalfFov = this.uniform(program, "uTanHalfFov");
    this.uAspect = this.uniform(program, "uAspect");

    const texture = gl.createTexture();
    if (!texture) throw new Error("createTexture failed");
    this.texture = texture;
    gl.bindTexture(gl.TEXTURE_2D, texture);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_WRAP_S, gl.CLAMP_TO_EDGE);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_WRAP_T, gl.CLAMP_TO_EDGE);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_MIN_FILTER, gl.LINEAR);
    gl.texParameteri(gl.TEXTURE_2D, gl.TEXTURE_MAG_FILTER, gl.LINEAR);
  }

  private uniform(program: WebGLProgram, name: string): WebGLUniformLocation {
    const loc = this.gl.getUniformLocation(program, name);
    if (!loc) throw new Error(`uniform ${name} not found`);
    return loc;
  }

  /** Largest texture edge the driver accepts. */
  maxTextureSize(): number {
    return this.gl.getParameter(this.gl.MAX_TEXTURE_SIZE) as number;
  }

  /** Upload a decoded panorama (caller downscales oversized images). */
  setImage(image: TexImageSource): void {
    const gl = this.gl;
    gl.bindTexture(gl.TEXTURE_2D, this.texture);
    gl.texImage2D(gl.TEXTURE_2D, 0, gl.RGBA, gl.RGBA, gl.UNSIGNED_BYTE, image);
    this.hasImage = true;
  }

  /** Grey placeholder while a panorama is loading or missing. */
  clearImage(): void {
    const gl = this.gl;
    gl.bindTexture(gl.TEXTURE_2D, this.texture);
    gl.texImage2D(
      gl.TEXTURE_2D, 0, gl.RGBA, 1, 1, 0, gl.RGBA, gl.UNSIGNED_BYTE,
      new Uint8Array([64, 64, 64, 255]),
    );
    this.hasImage = false;
  }

  draw(view: View): void {
    const gl = this.gl;
    const w = this.canvas.clientWidth || this.canvas.width;
    const h = this.canvas.clientHeight || this.canvas.height;
    const dpr = typeof window === "undefined" ? 1 : window.devicePixelRatio || 1;
    const pw = Math.max(1, Math.round(w * dpr));
    const ph = Math.max(1, Math.round(h * dpr));
    if (this.canvas.width !== pw || this.canvas.height !== ph) {
      this.canvas.width = pw;
      this.canvas.height = ph;
    }
    gl.viewport(0, 0, pw, ph);
    if (!this.hasImage) this.clearImage();
    gl.uniform1f(this.uYaw, view.yawDeg * DEG2RAD);
    gl.uniform1f(this.uPitch, view.pitchDeg * DEG2RAD);
    gl.uniform1f(this.uTanHalfFov, Math.tan((view.fovDeg * DEG2RAD) / 2));
    gl.uniform1f(this.uAspect, pw / ph);
    gl.drawArrays(gl.TRIANGLE_STRIP, 0, 4);
  }
}
