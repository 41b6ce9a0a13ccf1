// WebGL fiber view: tube meshes with hemisphere-style lighting and a mild
// depth attenuation for spatial perception. Geometry is re-tessellated
// client-side when the radius changes; colors come from the shared cohort
// color scale so both views stay comparable.

import { OrbitCamera, Mat4, perspective } from "./camera.js";
import { ColorScale, toCss } from "./color.js";
import { FiberGeometry, eachStreamline } from "./payload.js";
import { tessellateTube } from "./tube.js";

const VERTEX_SHADER = `
attribute vec3 position;
attribute vec3 normal;
attribute vec3 color;
uniform mat4 view;
uniform mat4 projection;
varying vec3 vColor;
varying vec3 vNormal;
varying float vDepth;
void main() {
  vec4 eye = view * vec4(position, 1.0);
  gl_Position = projection * eye;
  vColor = color;
  vNormal = mat3(view) * normal;
  vDepth = -eye.z;
}
`;

const FRAGMENT_SHADER = `
precision mediump float;
varying vec3 vColor;
varying vec3 vNormal;
varying float vDepth;
void main() {
  // hemisphere-style shading: sky term from the normal's upness plus a
  // headlight term; far fragments darken slightly (cheap occlusion cue)
  vec3 n = normalize(vNormal);
  float sky = 0.5 + 0.5 * n.y;
  float head = max(n.z, 0.0);
  float light = 0.35 + 0.4 * sky + 0.35 * head;
  float depthCue = clamp(1.1 - vDepth * 0.002, 0.6, 1.0);
  gl_FragColor = vec4(vColor * light * depthCue, 1.0);
}
`;

interface MeshBuffers {
  position: WebGLBuffer;
  normal: WebGLBuffer;
  color: WebGLBuffer;
  index: WebGLBuffer;
  count: number;
}

export class FiberView {
  private gl: WebGLRenderingContext | null = null;
  private program: WebGLProgram | null = null;
  private mesh: MeshBuffers | null = null;
  private projection: Mat4;
  private geometry: FiberGeometry | null = null;
  private scale: ColorScale | null = null;
  private radius = 0.5;

  constructor(private canvas: HTMLCanvasElement,
              public camera: OrbitCamera) {
    this.projection = perspective(
      Math.PI / 4, canvas.width / Math.max(1, canvas.height), 0.1, 2000);
    const gl = canvas.getContext("webgl");
    if (gl) {
      this.gl = gl;
      this.program = buildProgram(gl);
    }
    this.bindInput();
  }

  setGeometry(geometry: FiberGeometry, scale: ColorScale): void {
    this.geometry = geometry;
    this.scale = scale;
    this.rebuild();
  }

  setRadius(radius: number): void {
    if (radius === this.radius) return;
    this.radius = radius;
    this.rebuild();  // client-side re-tessellation, no re-fetch
  }

  /** CPU side of the pipeline: shared with tests. */
  buildMesh(): { positions: Float32Array; normals: Float32Array;
                 colors: Float32Array; indices: Uint32Array } | null {
    if (!this.geometry || !this.scale) return null;
    const parts: ReturnType<typeof tessellateTube>[] = [];
    for (const { points, values } of eachStreamline(this.geometry)) {
      parts.push(tessellateTube(points, values, this.radius));
    }
    let vertexTotal = 0;
    let indexTotal = 0;
    for (const p of parts) {
      vertexTotal += p.positions.length / 3;
      indexTotal += p.indices.length;
    }
    const positions = new Float32Array(vertexTotal * 3);
    const normals = new Float32Array(vertexTotal * 3);
    const colors = new Float32Array(vertexTotal * 3);
    const indices = new Uint32Array(indexTotal);
    let v = 0;
    let w = 0;
    for (const p of parts) {
      positions.set(p.positions, v * 3);
      normals.set(p.normals, v * 3);
      for (let i = 0; i < p.values.length; i++) {
        const rgb = this.scale(p.values[i]);
        colors[(v + i) * 3] = rgb[0];
        colors[(v + i) * 3 + 1] = rgb[1];
        colors[(v + i) * 3 + 2] = rgb[2];
      }
      for (let i = 0; i < p.indices.length; i++) {
        indices[w + i] = p.indices[i] + v;
      }
      v += p.positions.length / 3;
      w += p.indices.length;
    }
    return { positions, normals, colors, indices };
  }

  private rebuild(): void {
    const mesh = this.buildMesh();
    const gl = this.gl;
    if (!mesh || !gl || !this.program) return;
    this.mesh = {
      position: upload(gl, mesh.positions),
      normal: upload(gl, mesh.normals),
      color: upload(gl, mesh.colors),
      index: uploadIndex(gl, mesh.indices),
      count: mesh.indices.length,
    };
    this.render();
  }

  render(): void {
    const gl = this.gl;
    if (!gl || !this.program || !this.mesh) return;
    gl.viewport(0, 0, this.canvas.width, this.canvas.height);
    gl.enable(gl.DEPTH_TEST);
    gl.clearColor(0.08, 0.09, 0.11, 1.0);
    gl.clear(gl.COLOR_BUFFER_BIT | gl.DEPTH_BUFFER_BIT);
    gl.useProgram(this.program);

    bindAttribute(gl, this.program, "position", this.mesh.position);
    bindAttribute(gl, this.program, "normal", this.mesh.normal);
    bindAttribute(gl, this.program, "color", this.mesh.color);
    gl.bindBuffer(gl.ELEMENT_ARRAY_BUFFER, this.mesh.index);

    gl.uniformMatrix4fv(
      gl.getUniformLocation(this.program, "view"), false, this.camera.viewMatrix());
    gl.uniformMatrix4fv(
      gl.getUniformLocation(this.program, "projection"), false, this.projection);
    const ext = gl.getExtension("OES_element_index_uint");
    gl.drawElements(gl.TRIANGLES, this.mesh.count,
                    ext ? gl.UNSIGNED_INT : gl.UNSIGNED_SHORT, 0);
  }

  private bindInput(): void {
    let dragging = false;
    let panning = false;
    let lastX = 0;
    let lastY = 0;
    this.canvas.addEventListener("mousedown", e => {
      dragging = true;
      panning = e.shiftKey || e.button === 2;
      lastX = e.clientX;
      lastY = e.clientY;
    });
    window.addEventListener("mouseup", () => { dragging = false; });
    window.addEventListener("mousemove", e => {
      if (!dragging) return;
      const dx = e.clientX - lastX;
      const dy = e.clientY - lastY;
      lastX = e.clientX;
      lastY = e.clientY;
      if (panning) this.camera.pan(-dx, dy);
      else this.camera.rotate(dx * 0.01, dy * 0.01);
      this.onCameraChange();
    });
    this.canvas.addEventListener("wheel", e => {
      e.preventDefault();
      this.camera.zoom(e.deltaY > 0 ? 1.1 : 0.9);
      this.onCameraChange();
    });
    this.canvas.addEventListener("contextmenu", e => e.preventDefault());
  }

  // replaced by the app so linked views re-render together
  onCameraChange: () => void = () => this.render();
}

function buildProgram(gl: WebGLRenderingContext): WebGLProgram | null {
  const compile = (type: number, source: string) => {
    const shader = gl.createShader(type);
    if (!shader) return null;
    gl.shaderSource(shader, source);
    gl.compileShader(shader);
    return shader;
  };
  const vs = compile(gl.VERTEX_SHADER, VERTEX_SHADER);
  const fs = compile(gl.FRAGMENT_SHADER, FRAGMENT_SHADER);
  const program = gl.createProgram();
  if (!vs || !fs || !program) return null;
  gl.attachShader(program, vs);
  gl.attachShader(program, fs);
  gl.linkProgram(program);
  return program;
}

function upload(gl: WebGLRenderingContext, data: Float32Array): WebGLBuffer {
  const buffer = gl.createBuffer()!;
  gl.bindBuffer(gl.ARRAY_BUFFER, buffer);
  gl.bufferData(gl.ARRAY_BUFFER, data, gl.STATIC_DRAW);
  return buffer;
}

function uploadIndex(gl: WebGLRenderingContext, data: Uint32Array): WebGLBuffer {
  const buffer = gl.createBuffer()!;
  gl.bindBuffer(gl.ELEMENT_ARRAY_BUFFER, buffer);
  gl.bufferData(gl.ELEMENT_ARRAY_BUFFER, data, gl.STATIC_DRAW);
  return buffer;
}

function bindAttribute(gl: WebGLRenderingContext, program: WebGLProgram,
                       name: string, buffer: WebGLBuffer): void {
  const location = gl.getAttribLocation(program, name);
  if (location < 0) return;
  gl.bindBuffer(gl.ARRAY_BUFFER, buffer);
  gl.enableVertexAttribArray(location);
  gl.vertexAttribPointer(location, 3, gl.FLOAT, false, 0, 0);
}

/** Legend strip for the current color scale (shared across both views). */
export function colorLegend(scale: ColorScale, steps = 24): string {
  const [lo, hi] = scale.domain;
  const cells = Array.from({ length: steps }, (_, i) => {
    const value = lo + ((i + 0.5) / steps) * (hi - lo);
    return `<span class="legend-cell" style="background:${toCss(scale(value))}"></span>`;
  }).join("");
  return `<div class="legend">` +
         `<span class="legend-lo">${lo.toPrecision(3)}</span>${cells}` +
         `<span class="legend-hi">${hi.toPrecision(3)}</span></div>`;
}
