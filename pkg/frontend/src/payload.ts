// Decoder for the binary fiber geometry payload served by /fibers/{scan}.
//
// Layout (little-endian): "FLGE" magic, u32 header length, UTF-8 header
// JSON, u32 streamline count, u32 vertex counts, f32 xyz triplets, f32
// per-vertex values.

export interface FiberHeader {
  scan_id: string;
  region: number | null;
  measure: string;
  mode: string;
  log_scale: boolean;
  reference: number | null;
  value_range: [number, number];
  n_streamlines: number;
  n_vertices: number;
}

export interface FiberGeometry {
  header: FiberHeader;
  counts: Uint32Array;
  points: Float32Array;   // xyz interleaved, length 3 * n_vertices
  values: Float32Array;   // length n_vertices
}

const MAGIC = 0x46_4c_47_45; // "FLGE"

export function decodeFiberPayload(buffer: ArrayBuffer): FiberGeometry {
  const view = new DataView(buffer);
  const magic =
    (view.getUint8(0) << 24) | (view.getUint8(1) << 16) |
    (view.getUint8(2) << 8) | view.getUint8(3);
  if (magic !== MAGIC) throw new Error("bad fiber payload magic");

  let offset = 4;
  const headerLength = view.getUint32(offset, true);
  offset += 4;
  const headerBytes = new Uint8Array(buffer, offset, headerLength);
  const header = JSON.parse(new TextDecoder().decode(headerBytes)) as FiberHeader;
  offset += headerLength;

  const n = view.getUint32(offset, true);
  offset += 4;
  const counts = new Uint32Array(buffer.slice(offset, offset + 4 * n));
  offset += 4 * n;
  let total = 0;
  for (let i = 0; i < n; i++) total += counts[i];

  const points = new Float32Array(buffer.slice(offset, offset + 12 * total));
  offset += 12 * total;
  const values = new Float32Array(buffer.slice(offset, offset + 4 * total));

  if (header.n_streamlines !== n || header.n_vertices !== total) {
    throw new Error("fiber payload header disagrees with body");
  }
  return { header, counts, points, values };
}

/** Per-streamline views into the flat arrays (no copies). */
export function* eachStreamline(geometry: FiberGeometry):
    Generator<{ points: Float32Array; values: Float32Array }> {
  let start = 0;
  for (let i = 0; i < geometry.counts.length; i++) {
    const count = geometry.counts[i];
    yield {
      points: geometry.points.subarray(3 * start, 3 * (start + count)),
      values: geometry.values.subarray(start, start + count),
    };
    start += count;
  }
}
