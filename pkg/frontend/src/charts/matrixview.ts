// Covariance/correlation heatmap and the parallel-coordinates view. Both
// consume the server's community-ordered feature permutation; applying the
// same order to the axes keeps the two views mentally aligned.

import { OrderedMatrixPayload } from "../api.js";
import { diverging, toCss } from "../color.js";
import { esc, extent, linearScale, polylinePath, svgDoc, tag } from "./svg.js";

const SIZE = 300;
const LABEL = 86;

export function matrixHeatmap(payload: OrderedMatrixPayload): string {
  const names = payload.feature_names;
  const n = names.length;
  if (n === 0) return svgDoc(SIZE, SIZE, "", "chart matrix");
  const cell = (SIZE - LABEL) / n;
  const magnitude = Math.max(1e-12,
    ...payload.cells.flat().map(v => Math.abs(v)));

  const cells: string[] = [];
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const value = payload.cells[i][j];
      cells.push(tag("rect", {
        class: "matrix-cell",
        "data-row": names[i],
        "data-col": names[j],
        x: LABEL + j * cell,
        y: LABEL + i * cell,
        width: cell,
        height: cell,
        fill: toCss(diverging(0.5 + value / (2 * magnitude))),
      }));
    }
  }
  // community boundaries drawn as separators
  const separators: string[] = [];
  for (let i = 1; i < n; i++) {
    const prev = payload.communities[names[i - 1]];
    const here = payload.communities[names[i]];
    if (prev !== here) {
      const p = LABEL + i * cell;
      separators.push(
        tag("line", { x1: p, x2: p, y1: LABEL, y2: SIZE, stroke: "#222" }),
        tag("line", { x1: LABEL, x2: SIZE, y1: p, y2: p, stroke: "#222" }),
      );
    }
  }
  const labels = names.map((name, i) =>
    tag("text", {
      x: LABEL - 4, y: LABEL + (i + 0.7) * cell, "text-anchor": "end",
      "font-size": Math.min(9, cell - 1),
    }, esc(name)));
  return svgDoc(SIZE, SIZE, cells.join("") + separators.join("") + labels.join(""),
                `chart matrix ${payload.mode}`);
}

export interface ParallelCoordsRow {
  scanId: string;
  label: string;               // DISEASE / CONTROL
  values: (number | null)[];   // aligned with the axis order
}

/**
 * Parallel coordinates; the axes come pre-permuted by the matrix ordering
 * payload so both views share one feature order.
 */
export function parallelCoordinates(
  axes: string[],
  rows: ParallelCoordsRow[],
  highlightedScans: Set<string>,
): string {
  const width = 360;
  const height = 220;
  const margin = { top: 26, bottom: 8 };
  if (axes.length === 0) return svgDoc(width, height, "", "chart parcoords");
  const axisX = linearScale([0, Math.max(1, axes.length - 1)],
                            [30, width - 10]);
  const scales = axes.map((_, j) => {
    const values = rows.map(r => r.values[j]).filter((v): v is number => v !== null);
    return linearScale(extent(values), [height - margin.bottom, margin.top]);
  });

  const axisMarks = axes.map((name, j) =>
    tag("line", {
      class: "axis", x1: axisX(j), x2: axisX(j),
      y1: margin.top, y2: height - margin.bottom, stroke: "#999",
    }) + tag("text", {
      class: "axis-label", "data-axis": name,
      x: axisX(j), y: margin.top - 12, "text-anchor": "middle",
      "font-size": 8,
      transform: `rotate(-18 ${axisX(j)} ${margin.top - 12})`,
    }, esc(name)));

  const lines = rows.map(row => {
    const xs: number[] = [];
    const ys: number[] = [];
    row.values.forEach((v, j) => {
      if (v !== null) {
        xs.push(axisX(j));
        ys.push(scales[j](v));
      }
    });
    const highlighted = highlightedScans.has(row.scanId);
    return tag("path", {
      class: `pc-line ${row.label.toLowerCase()}${highlighted ? " highlighted" : ""}`,
      "data-scan": row.scanId,
      d: polylinePath(xs, ys),
      fill: "none",
      stroke: row.label === "DISEASE" ? "#e66101" : "#1b9e77",
      "stroke-opacity": highlighted ? 1 : 0.25,
      "stroke-width": highlighted ? 2.5 : 1,
    });
  });
  return svgDoc(width, height, axisMarks.join("") + lines.join(""),
                "chart parcoords");
}
