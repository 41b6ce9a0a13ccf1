// Saliency bar plots for the exploration modules: a wide bar encodes the
// mean score, a thin gray bar overlaid on it encodes the standard deviation.

import { esc, linearScale, svgDoc, tag } from "./svg.js";

export interface BarDatum {
  id: string;
  label: string;
  mean: number;
  std: number;
  selected: boolean;
}

export interface BarPlotOptions {
  width?: number;
  rowHeight?: number;
  maxValue?: number;
}

export const BAR_FILL = "#7c9fc4";      // blue-gray mean bar
export const STD_FILL = "#8a8a8a";      // thin gray uncertainty bar
export const SELECTED_FILL = "#3a6ea8";

export function barPlot(data: BarDatum[], options: BarPlotOptions = {}): string {
  const width = options.width ?? 320;
  const rowHeight = options.rowHeight ?? 18;
  const labelWidth = 130;
  const plotWidth = width - labelWidth - 50;
  const maxValue = options.maxValue ??
    Math.max(1e-12, ...data.map(d => d.mean + d.std));
  const x = linearScale([0, maxValue], [0, plotWidth]);

  const rows = data.map((d, i) => {
    const y = i * rowHeight;
    const barY = y + 3;
    const bar = tag("rect", {
      class: "mean-bar", "data-id": d.id,
      x: labelWidth, y: barY, width: Math.max(0, x(d.mean)),
      height: rowHeight - 7,
      fill: d.selected ? SELECTED_FILL : BAR_FILL,
    });
    // thin std bar centered on the bar end
    const stdBar = tag("rect", {
      class: "std-bar",
      x: labelWidth + Math.max(0, x(Math.max(0, d.mean - d.std))),
      y: y + rowHeight / 2 - 1.5,
      width: Math.max(0.5, x(Math.min(maxValue, d.mean + d.std))
                            - x(Math.max(0, d.mean - d.std))),
      height: 3,
      fill: STD_FILL,
    });
    const label = tag("text", {
      x: labelWidth - 6, y: y + rowHeight - 6, "text-anchor": "end",
      "font-size": 10,
    }, esc(d.label));
    const value = tag("text", {
      x: labelWidth + plotWidth + 4, y: y + rowHeight - 6, "font-size": 9,
    }, d.mean.toFixed(3));
    const hit = tag("rect", {
      class: "row-hit", "data-id": d.id,
      x: 0, y, width, height: rowHeight, fill: "transparent",
    });
    return tag("g", { class: d.selected ? "row selected" : "row" },
               bar + stdBar + label + value + hit);
  });
  return svgDoc(width, Math.max(1, data.length) * rowHeight, rows.join(""),
                "chart bar-plot");
}
