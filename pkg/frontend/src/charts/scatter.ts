// Glyph scatter plots: prediction-vs-feature (with the 0.5 discrimination
// threshold line) and the 2-D projection view. Both use the shared glyph
// encoding and connect a subject's multiple visits with a thin curve.

import { PredFeaturePoint, ProjectionPoint } from "../api.js";
import { Glyph, encodeGlyph, roleOf } from "../glyphs.js";
import { SelectionState } from "../state.js";
import { extent, linearScale, polylinePath, svgDoc, tag, trianglePoints } from "./svg.js";

const WIDTH = 330;
const HEIGHT = 250;
const MARGIN = { left: 42, right: 10, top: 10, bottom: 28 };

function glyphMarkup(cx: number, cy: number, glyph: Glyph, scanId: string): string {
  const common = {
    class: "glyph",
    "data-scan": scanId,
    fill: glyph.fill,
    stroke: glyph.border ?? "none",
    "stroke-width": glyph.borderWidth,
  };
  return glyph.shape === "circle"
    ? tag("circle", { ...common, cx, cy, r: 4 })
    : tag("polygon", { ...common, points: trianglePoints(cx, cy, 4) });
}

export interface ScanMeta {
  subjectId: string;
  firstScan: string | null; // earliest visit of the subject
}

export function predFeatureScatter(
  points: PredFeaturePoint[],
  state: SelectionState,
  meta: (scanId: string) => ScanMeta,
): string {
  const usable = points.filter(p => p.value !== null);
  const x = linearScale(extent(usable.map(p => p.value as number)),
                        [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([0, 1], [HEIGHT - MARGIN.bottom, MARGIN.top]);

  // discrimination threshold at P = 0.5
  const threshold = tag("line", {
    class: "threshold", x1: MARGIN.left, x2: WIDTH - MARGIN.right,
    y1: y(0.5), y2: y(0.5),
    stroke: "#555", "stroke-dasharray": "4 3",
  });

  const bySubject = new Map<string, PredFeaturePoint[]>();
  for (const p of usable) {
    const list = bySubject.get(p.subject_id) ?? [];
    list.push(p);
    bySubject.set(p.subject_id, list);
  }
  const connectors = [...bySubject.values()]
    .filter(list => list.length > 1)
    .map(list => tag("path", {
      class: "visit-link",
      d: polylinePath(list.map(p => x(p.value as number)),
                      list.map(p => y(p.p_disease))),
      fill: "none", stroke: "#bbb",
    }));

  const glyphs = usable.map(p => {
    const role = roleOf(state, p.subject_id, p.scan_id, meta(p.scan_id).firstScan);
    const glyph = encodeGlyph(p.label, p.correct, role);
    return glyphMarkup(x(p.value as number), y(p.p_disease), glyph, p.scan_id);
  });

  const axis = tag("line", {
    x1: MARGIN.left, x2: WIDTH - MARGIN.right,
    y1: HEIGHT - MARGIN.bottom, y2: HEIGHT - MARGIN.bottom,
    stroke: "#999",
  }) + tag("line", {
    x1: MARGIN.left, x2: MARGIN.left, y1: MARGIN.top,
    y2: HEIGHT - MARGIN.bottom, stroke: "#999",
  }) + tag("text", {
    x: MARGIN.left - 28, y: y(0.5) + 3, "font-size": 9,
  }, "0.5");

  return svgDoc(WIDTH, HEIGHT,
                axis + threshold + connectors.join("") + glyphs.join(""),
                "chart pred-feature");
}

export function projectionScatter(
  points: ProjectionPoint[],
  state: SelectionState,
  meta: (scanId: string) => ScanMeta,
): string {
  const x = linearScale(extent(points.map(p => p.x)),
                        [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale(extent(points.map(p => p.y)),
                        [HEIGHT - MARGIN.bottom, MARGIN.top]);
  const glyphs = points.map(p => {
    const role = roleOf(state, p.subject_id, p.scan_id, meta(p.scan_id).firstScan);
    const glyph = encodeGlyph(p.label, p.correct ?? true, role);
    return glyphMarkup(x(p.x), y(p.y), glyph, p.scan_id);
  });
  return svgDoc(WIDTH, HEIGHT, glyphs.join(""), "chart projection");
}
