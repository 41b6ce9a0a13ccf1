// Subject time-point strip above each fiber view: the selected feature over
// visits, control-group mean (dotted blue) and ±1 std (dotted black)
// reference lines; visit markers are clickable to switch the rendered scan.

import { TimelinePayload } from "../api.js";
import { extent, linearScale, polylinePath, svgDoc, tag } from "./svg.js";

const WIDTH = 300;
const HEIGHT = 90;
const MARGIN = { left: 34, right: 10, top: 8, bottom: 16 };

export const CONTROL_MEAN_STROKE = "#3a6ea8";   // dotted blue
export const CONTROL_STD_STROKE = "#333333";    // dotted black

export function timelineChart(payload: TimelinePayload,
                              selectedScan: string | null): string {
  const visits = payload.visits;
  const usable = visits.filter(v => v.value !== null);
  const ref = payload.control_reference;
  const valuePool = usable.map(v => v.value as number);
  if (ref.mean !== null && ref.std !== null) {
    valuePool.push(ref.mean - ref.std, ref.mean + ref.std);
  }
  const x = linearScale([0, Math.max(1, visits.length - 1)],
                        [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale(extent(valuePool), [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [];
  if (ref.mean !== null) {
    parts.push(tag("line", {
      class: "control-mean",
      x1: MARGIN.left, x2: WIDTH - MARGIN.right,
      y1: y(ref.mean), y2: y(ref.mean),
      stroke: CONTROL_MEAN_STROKE, "stroke-dasharray": "4 3",
    }));
    if (ref.std !== null) {
      for (const bound of [ref.mean - ref.std, ref.mean + ref.std]) {
        parts.push(tag("line", {
          class: "control-std",
          x1: MARGIN.left, x2: WIDTH - MARGIN.right,
          y1: y(bound), y2: y(bound),
          stroke: CONTROL_STD_STROKE, "stroke-dasharray": "2 3",
        }));
      }
    }
  }

  const xs = usable.map(v => x(visits.indexOf(v)));
  const ys = usable.map(v => y(v.value as number));
  if (xs.length > 1) {
    parts.push(tag("path", {
      class: "visit-path", d: polylinePath(xs, ys),
      fill: "none", stroke: "#888",
    }));
  }
  visits.forEach((visit, i) => {
    const cy = visit.value !== null ? y(visit.value) : HEIGHT / 2;
    parts.push(tag("circle", {
      class: `visit${visit.scan_id === selectedScan ? " selected" : ""}`,
      "data-scan": visit.scan_id,
      cx: x(i), cy, r: visit.scan_id === selectedScan ? 6 : 4,
      fill: visit.scan_id === selectedScan ? "#3a6ea8" : "#ccc",
      stroke: "#444",
    }));
    parts.push(tag("text", {
      x: x(i), y: HEIGHT - 4, "text-anchor": "middle", "font-size": 7,
    }, visit.visit_date));
  });
  return svgDoc(WIDTH, HEIGHT, parts.join(""), "chart timeline");
}
