// Group comparison charts: overlaid histograms, age-trend series, and the
// demographics panel charts. Disease is orange, control is green; in trend
// views male series are solid and female series dotted.

import { HistogramPayload, TrendsPayload } from "../api.js";
import { CONTROL_FILL, DISEASE_FILL } from "../glyphs.js";
import { extent, linearScale, polylinePath, svgDoc, tag } from "./svg.js";

const WIDTH = 330;
const HEIGHT = 220;
const MARGIN = { left: 40, right: 10, top: 10, bottom: 24 };

export function groupHistogram(payload: HistogramPayload): string {
  const edges = payload.bin_edges;
  const groups = Object.entries(payload.counts);
  const maxCount = Math.max(1, ...groups.flatMap(([, c]) => c));
  const x = linearScale([edges[0], edges[edges.length - 1]],
                        [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([0, maxCount], [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const bars = groups.flatMap(([group, counts]) =>
    counts.map((count, i) => tag("rect", {
      class: `hist-bar ${group.toLowerCase()}`,
      x: x(edges[i]),
      y: y(count),
      width: Math.max(0.5, x(edges[i + 1]) - x(edges[i]) - 1),
      height: Math.max(0, y(0) - y(count)),
      fill: group === "DISEASE" ? DISEASE_FILL : CONTROL_FILL,
      "fill-opacity": 0.45,
    })),
  );
  const axis = tag("line", {
    x1: MARGIN.left, x2: WIDTH - MARGIN.right, y1: y(0), y2: y(0),
    stroke: "#999",
  });
  return svgDoc(WIDTH, HEIGHT, bars.join("") + axis, "chart histogram");
}

export function trendChart(payload: TrendsPayload): string {
  const allPoints = Object.values(payload.series).flat();
  if (allPoints.length === 0) return svgDoc(WIDTH, HEIGHT, "", "chart trends");
  const x = linearScale(extent(allPoints.map(p => p.age)),
                        [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale(
    extent(allPoints.flatMap(p => [p.mean - p.std, p.mean + p.std])),
    [HEIGHT - MARGIN.bottom, MARGIN.top],
  );

  const lines = Object.entries(payload.series).map(([key, points]) => {
    const [group, sex] = key.split("/");
    const color = group === "DISEASE" ? DISEASE_FILL : CONTROL_FILL;
    const line = tag("path", {
      class: `trend-line ${key.replace("/", "-").toLowerCase()}`,
      d: polylinePath(points.map(p => x(p.age)), points.map(p => y(p.mean))),
      fill: "none",
      stroke: color,
      "stroke-width": 2,
      // female series dotted, male (or unsplit) solid
      "stroke-dasharray": sex === "F" ? "3 3" : "none",
    });
    const band = points.map(p => tag("line", {
      class: "trend-std",
      x1: x(p.age), x2: x(p.age),
      y1: y(p.mean - p.std), y2: y(p.mean + p.std),
      stroke: color, "stroke-opacity": 0.4,
    }));
    return line + band.join("");
  });
  return svgDoc(WIDTH, HEIGHT, lines.join(""), "chart trends");
}

export interface Demographics {
  bin_edges: number[];
  groups: Record<string, {
    age_counts: number[];
    sex_counts: Record<string, number>;
    total: number;
  }>;
}

export function demographicsChart(demo: Demographics): string {
  const edges = demo.bin_edges;
  const groups = Object.entries(demo.groups);
  const maxCount = Math.max(1, ...groups.flatMap(([, g]) => g.age_counts));
  const x = linearScale([edges[0], edges[edges.length - 1]],
                        [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([0, maxCount], [HEIGHT - MARGIN.bottom, MARGIN.top]);
  const bars = groups.flatMap(([group, g], gi) =>
    g.age_counts.map((count, i) => {
      const w = (x(edges[i + 1]) - x(edges[i])) / 2 - 1;
      return tag("rect", {
        class: `demo-bar ${group.toLowerCase()}`,
        x: x(edges[i]) + gi * w,
        y: y(count),
        width: Math.max(0.5, w),
        height: Math.max(0, y(0) - y(count)),
        fill: group === "DISEASE" ? DISEASE_FILL : CONTROL_FILL,
      });
    }),
  );
  const labels = groups.map(([group, g], gi) => tag("text", {
    x: MARGIN.left + 4, y: MARGIN.top + 12 + gi * 12, "font-size": 10,
    fill: group === "DISEASE" ? DISEASE_FILL : CONTROL_FILL,
  }, `${group}: ${g.total} (M ${g.sex_counts.M ?? 0} / F ${g.sex_counts.F ?? 0})`));
  return svgDoc(WIDTH, HEIGHT, bars.join("") + labels.join(""), "chart demographics");
}
