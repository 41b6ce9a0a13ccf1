// ROC curve with a per-trial min/max variance envelope, plus the confusion
// matrix / performance summary block for the pipeline panel.

import { RegionReport } from "../api.js";
import { esc, linearScale, polylinePath, svgDoc, tag } from "./svg.js";

const SIZE = 230;
const MARGIN = 30;

/** Interpolate one trial's TPR at a grid FPR (curves are step-monotone). */
function interpolate(fpr: number[], tpr: number[], at: number): number {
  if (at <= fpr[0]) return tpr[0];
  for (let i = 1; i < fpr.length; i++) {
    if (fpr[i] >= at) {
      const span = fpr[i] - fpr[i - 1];
      if (span <= 0) return Math.max(tpr[i], tpr[i - 1]);
      const t = (at - fpr[i - 1]) / span;
      return tpr[i - 1] + t * (tpr[i] - tpr[i - 1]);
    }
  }
  return tpr[tpr.length - 1];
}

export interface RocBand {
  grid: number[];
  lo: number[];
  hi: number[];
  mean: number[];
}

/** Vertical min/max envelope of the trial curves on the served FPR grid. */
export function rocEnvelope(roc: NonNullable<RegionReport["roc"]>): RocBand {
  const grid = roc.grid_fpr;
  const lo = grid.map(() => Infinity);
  const hi = grid.map(() => -Infinity);
  for (const trial of roc.trials) {
    grid.forEach((g, i) => {
      const v = interpolate(trial.fpr, trial.tpr, g);
      if (v < lo[i]) lo[i] = v;
      if (v > hi[i]) hi[i] = v;
    });
  }
  return { grid, lo, hi, mean: roc.mean_tpr };
}

export function rocChart(roc: NonNullable<RegionReport["roc"]>): string {
  const band = rocEnvelope(roc);
  const x = linearScale([0, 1], [MARGIN, SIZE - 8]);
  const y = linearScale([0, 1], [SIZE - MARGIN, 8]);

  const area =
    band.grid.map((g, i) => `${i === 0 ? "M" : "L"} ${x(g)} ${y(band.hi[i])}`).join(" ") +
    [...band.grid.keys()].reverse()
      .map(i => ` L ${x(band.grid[i])} ${y(band.lo[i])}`).join("") + " Z";

  const body =
    tag("path", { class: "roc-band", d: area, fill: "#7c9fc4",
                  "fill-opacity": 0.3, stroke: "none" }) +
    tag("path", {
      class: "roc-mean",
      d: polylinePath(band.grid.map(x), band.mean.map(y)),
      fill: "none", stroke: "#3a6ea8", "stroke-width": 2,
    }) +
    tag("line", { class: "roc-diag", x1: x(0), y1: y(0), x2: x(1), y2: y(1),
                  stroke: "#999", "stroke-dasharray": "3 3" }) +
    tag("text", { x: SIZE / 2, y: SIZE - 6, "text-anchor": "middle",
                  "font-size": 9 }, "FPR") +
    tag("text", { x: 10, y: SIZE / 2, "font-size": 9,
                  transform: `rotate(-90 10 ${SIZE / 2})` }, "TPR") +
    tag("text", { x: SIZE - 12, y: 16, "text-anchor": "end", "font-size": 10 },
        `AUC ${roc.auc_mean.toFixed(3)} ± ${roc.auc_std.toFixed(3)}`);
  return svgDoc(SIZE, SIZE, body, "chart roc");
}

export function performanceSummary(report: RegionReport): string {
  if (report.error || !report.performance || !report.confusion) {
    return `<div class="perf-error">${esc(report.error ?? "no result")}</div>`;
  }
  const metrics = ["accuracy", "precision", "recall", "f1"]
    .map(name => {
      const m = report.performance![name];
      return `<div class="metric"><span class="metric-name">${name}</span>` +
             `<span class="metric-value">${m.mean.toFixed(3)} ± ${m.std.toFixed(3)}</span></div>`;
    }).join("");
  const c = report.confusion;
  const sizes = report.group_sizes!;
  const confusion =
    `<table class="confusion"><tr><th></th><th>pred D</th><th>pred C</th></tr>` +
    `<tr><th>D</th><td>${c.tp}</td><td>${c.fn}</td></tr>` +
    `<tr><th>C</th><td>${c.fp}</td><td>${c.tn}</td></tr></table>`;
  const groups =
    `<div class="group-sizes">disease ${sizes.disease} / control ${sizes.control}</div>`;
  return `<div class="performance">${metrics}${confusion}${groups}</div>`;
}
