// Orbit camera with 4x4 column-major matrices (WebGL convention).
// Camera linking works by sharing one OrbitState between two views, so
// linked views pan, rotate, and zoom together by construction.

export type Mat4 = Float32Array; // 16 entries, column-major

export function identity(): Mat4 {
  const m = new Float32Array(16);
  m[0] = m[5] = m[10] = m[15] = 1;
  return m;
}

export function perspective(fovY: number, aspect: number, near: number,
                            far: number): Mat4 {
  const f = 1 / Math.tan(fovY / 2);
  const m = new Float32Array(16);
  m[0] = f / aspect;
  m[5] = f;
  m[10] = (far + near) / (near - far);
  m[11] = -1;
  m[14] = (2 * far * near) / (near - far);
  return m;
}

type Vec3 = [number, number, number];

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(v: Vec3): Vec3 {
  const n = Math.hypot(v[0], v[1], v[2]) || 1;
  return [v[0] / n, v[1] / n, v[2] / n];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export function lookAt(eye: Vec3, target: Vec3, up: Vec3): Mat4 {
  const z = normalize(sub(eye, target));
  const x = normalize(cross(up, z));
  const y = cross(z, x);
  const m = identity();
  m[0] = x[0]; m[4] = x[1]; m[8] = x[2];
  m[1] = y[0]; m[5] = y[1]; m[9] = y[2];
  m[2] = z[0]; m[6] = z[1]; m[10] = z[2];
  m[12] = -dot(x, eye);
  m[13] = -dot(y, eye);
  m[14] = -dot(z, eye);
  return m;
}

export interface OrbitState {
  theta: number;     // azimuth, radians
  phi: number;       // inclination from the y axis
  distance: number;
  target: Vec3;
}

export function defaultOrbit(): OrbitState {
  return { theta: 0.5, phi: 1.1, distance: 120, target: [0, 0, 0] };
}

const PHI_EPS = 0.01;

export class OrbitCamera {
  constructor(public state: OrbitState = defaultOrbit()) {}

  rotate(dTheta: number, dPhi: number): void {
    this.state.theta += dTheta;
    this.state.phi = Math.min(Math.PI - PHI_EPS,
                              Math.max(PHI_EPS, this.state.phi + dPhi));
  }

  zoom(factor: number): void {
    this.state.distance = Math.max(1, this.state.distance * factor);
  }

  pan(dx: number, dy: number): void {
    // move the target in the camera's screen plane
    const [x, y] = this.basis();
    const t = this.state.target;
    const scale = this.state.distance * 0.002;
    this.state.target = [
      t[0] + (x[0] * dx + y[0] * dy) * scale,
      t[1] + (x[1] * dx + y[1] * dy) * scale,
      t[2] + (x[2] * dx + y[2] * dy) * scale,
    ];
  }

  eye(): Vec3 {
    const { theta, phi, distance, target } = this.state;
    return [
      target[0] + distance * Math.sin(phi) * Math.cos(theta),
      target[1] + distance * Math.cos(phi),
      target[2] + distance * Math.sin(phi) * Math.sin(theta),
    ];
  }

  private basis(): [Vec3, Vec3] {
    const z = normalize(sub(this.eye(), this.state.target));
    const x = normalize(cross([0, 1, 0], z));
    const y = cross(z, x);
    return [x, y];
  }

  viewMatrix(): Mat4 {
    return lookAt(this.eye(), this.state.target, [0, 1, 0]);
  }

  clone(): OrbitCamera {
    const s = this.state;
    return new OrbitCamera({
      theta: s.theta, phi: s.phi, distance: s.distance,
      target: [...s.target] as Vec3,
    });
  }
}

/**
 * Two cameras with a link toggle. Linked: both views read the same orbit
 * state, so their view matrices are identical every frame. Unlinking clones
 * the shared state so the views diverge from the current pose.
 */
export class CameraPair {
  private left_: OrbitCamera;
  private right_: OrbitCamera;
  private linked_ = false;

  constructor() {
    this.left_ = new OrbitCamera();
    this.right_ = new OrbitCamera();
  }

  get linked(): boolean {
    return this.linked_;
  }

  setLinked(linked: boolean): void {
    if (linked === this.linked_) return;
    if (linked) {
      this.right_ = this.left_; // share state: identical from now on
    } else {
      this.right_ = this.left_.clone();
    }
    this.linked_ = linked;
  }

  camera(slot: "left" | "right"): OrbitCamera {
    return slot === "left" ? this.left_ : this.right_;
  }
}
