// Color mapping for fiber values: a sequential map for direct mode and a
// diverging blue-white-red map for contrastive mode, where values near zero
// (no difference from the healthy-group mean) stay in a neutral band.

export type Rgb = [number, number, number]; // 0..1

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

function lerpRgb(a: Rgb, b: Rgb, t: number): Rgb {
  return [lerp(a[0], b[0], t), lerp(a[1], b[1], t), lerp(a[2], b[2], t)];
}

const SEQ_STOPS: Rgb[] = [
  [0.267, 0.005, 0.329],
  [0.229, 0.322, 0.546],
  [0.127, 0.566, 0.551],
  [0.369, 0.788, 0.382],
  [0.993, 0.906, 0.144],
];

const NEUTRAL: Rgb = [0.969, 0.966, 0.965];
const DIV_NEG: Rgb = [0.129, 0.400, 0.675]; // blue: below the control mean
const DIV_POS: Rgb = [0.698, 0.094, 0.168]; // red: above the control mean

export function sequential(t: number): Rgb {
  const x = Math.min(1, Math.max(0, t)) * (SEQ_STOPS.length - 1);
  const i = Math.min(SEQ_STOPS.length - 2, Math.floor(x));
  return lerpRgb(SEQ_STOPS[i], SEQ_STOPS[i + 1], x - i);
}

export function diverging(t: number): Rgb {
  // t in [0, 1], midpoint 0.5 is neutral
  const x = Math.min(1, Math.max(0, t));
  return x < 0.5
    ? lerpRgb(DIV_NEG, NEUTRAL, x * 2)
    : lerpRgb(NEUTRAL, DIV_POS, (x - 0.5) * 2);
}

export interface ColorScale {
  (value: number): Rgb;
  domain: [number, number];
}

/**
 * Build the fiber color scale for a mode and the cohort-global value range
 * (shared across brains so colors are comparable between views).
 * Contrastive mode centers the diverging map at zero difference.
 */
export function fiberColorScale(
  mode: "direct" | "contrastive",
  range: [number, number],
): ColorScale {
  const [lo, hi] = range;
  if (mode === "contrastive") {
    const extent = Math.max(Math.abs(lo), Math.abs(hi), 1e-12);
    const scale = ((value: number) =>
      diverging(0.5 + value / (2 * extent))) as ColorScale;
    scale.domain = [-extent, extent];
    return scale;
  }
  const span = hi - lo || 1e-12;
  const scale = ((value: number) => sequential((value - lo) / span)) as ColorScale;
  scale.domain = [lo, hi];
  return scale;
}

/** Distance (max channel) from the diverging map's neutral midpoint color. */
export function neutralDistance(color: Rgb): number {
  return Math.max(
    Math.abs(color[0] - NEUTRAL[0]),
    Math.abs(color[1] - NEUTRAL[1]),
    Math.abs(color[2] - NEUTRAL[2]),
  );
}

export function isNeutral(color: Rgb, tolerance = 0.06): boolean {
  return neutralDistance(color) <= tolerance;
}

export function toCss(color: Rgb): string {
  const c = color.map(v => Math.round(Math.min(1, Math.max(0, v)) * 255));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}
