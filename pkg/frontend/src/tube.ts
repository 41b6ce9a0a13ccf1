// Streamline tube tessellation, done client-side so the radius slider
// regenerates geometry without another fetch.
//
// Each polyline becomes a triangle ring strip around parallel-transported
// frames; per-ring vertex values repeat the source vertex value so the
// fragment color follows the mapped measure along the fiber.

export interface TubeMesh {
  positions: Float32Array;  // xyz per vertex
  normals: Float32Array;
  values: Float32Array;     // scalar per vertex (for color lookup)
  indices: Uint32Array;
}

type V3 = [number, number, number];

function get(points: Float32Array, i: number): V3 {
  return [points[3 * i], points[3 * i + 1], points[3 * i + 2]];
}

function subV(a: V3, b: V3): V3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function crossV(a: V3, b: V3): V3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normV(v: V3): V3 {
  const n = Math.hypot(v[0], v[1], v[2]);
  return n > 1e-12 ? [v[0] / n, v[1] / n, v[2] / n] : [1, 0, 0];
}

function scaleAdd(base: V3, dir: V3, s: number): V3 {
  return [base[0] + dir[0] * s, base[1] + dir[1] * s, base[2] + dir[2] * s];
}

/** Tangents per vertex: central differences inside, one-sided at the ends. */
function tangents(points: Float32Array, n: number): V3[] {
  const out: V3[] = [];
  for (let i = 0; i < n; i++) {
    const prev = Math.max(0, i - 1);
    const next = Math.min(n - 1, i + 1);
    out.push(normV(subV(get(points, next), get(points, prev))));
  }
  return out;
}

export function tessellateTube(
  points: Float32Array,
  values: Float32Array,
  radius: number,
  radialSegments = 6,
): TubeMesh {
  const n = points.length / 3;
  if (n < 2) {
    return {
      positions: new Float32Array(0),
      normals: new Float32Array(0),
      values: new Float32Array(0),
      indices: new Uint32Array(0),
    };
  }
  const tans = tangents(points, n);

  // parallel transport an initial normal along the line to avoid twisting
  let normal = normV(crossV(tans[0], Math.abs(tans[0][1]) < 0.9 ? [0, 1, 0] : [1, 0, 0]));
  const ringCount = n;
  const positions = new Float32Array(ringCount * radialSegments * 3);
  const normals = new Float32Array(ringCount * radialSegments * 3);
  const outValues = new Float32Array(ringCount * radialSegments);

  for (let i = 0; i < n; i++) {
    if (i > 0) {
      // rotate the frame to stay orthogonal to the new tangent
      const axis = crossV(tans[i - 1], tans[i]);
      const axisLen = Math.hypot(axis[0], axis[1], axis[2]);
      if (axisLen > 1e-9) {
        normal = normV(crossV(crossV(tans[i], normal), tans[i]));
      }
    }
    const binormal = normV(crossV(tans[i], normal));
    const center = get(points, i);
    for (let j = 0; j < radialSegments; j++) {
      const angle = (2 * Math.PI * j) / radialSegments;
      const dir: V3 = [
        normal[0] * Math.cos(angle) + binormal[0] * Math.sin(angle),
        normal[1] * Math.cos(angle) + binormal[1] * Math.sin(angle),
        normal[2] * Math.cos(angle) + binormal[2] * Math.sin(angle),
      ];
      const p = scaleAdd(center, dir, radius);
      const k = (i * radialSegments + j) * 3;
      positions[k] = p[0];
      positions[k + 1] = p[1];
      positions[k + 2] = p[2];
      normals[k] = dir[0];
      normals[k + 1] = dir[1];
      normals[k + 2] = dir[2];
      outValues[i * radialSegments + j] = values[i];
    }
  }

  const indices = new Uint32Array((n - 1) * radialSegments * 6);
  let w = 0;
  for (let i = 0; i < n - 1; i++) {
    for (let j = 0; j < radialSegments; j++) {
      const a = i * radialSegments + j;
      const b = i * radialSegments + ((j + 1) % radialSegments);
      const c = (i + 1) * radialSegments + j;
      const d = (i + 1) * radialSegments + ((j + 1) % radialSegments);
      indices[w++] = a; indices[w++] = c; indices[w++] = b;
      indices[w++] = b; indices[w++] = c; indices[w++] = d;
    }
  }
  return { positions, normals, values: outValues, indices };
}

/** Thick-line fallback: plain line-segment pairs (for very large sets). */
export function polylineSegments(points: Float32Array, values: Float32Array): {
  positions: Float32Array; values: Float32Array;
} {
  const n = points.length / 3;
  const positions = new Float32Array(Math.max(0, n - 1) * 6);
  const outValues = new Float32Array(Math.max(0, n - 1) * 2);
  for (let i = 0; i + 1 < n; i++) {
    positions.set(points.subarray(3 * i, 3 * i + 6), 6 * i);
    outValues[2 * i] = values[i];
    outValues[2 * i + 1] = values[i + 1];
  }
  return { positions, values: outValues };
}
