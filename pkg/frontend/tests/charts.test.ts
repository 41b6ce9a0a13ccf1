// Chart builders are pure (data -> SVG string); assertions inspect the
// markup: axis permutations, the 0.5 threshold line, uncertainty bars,
// shared histogram edges, the ROC envelope, clickable timeline visits.

import { describe, expect, it } from "vitest";
import { barPlot } from "../src/charts/bars.js";
import { groupHistogram, trendChart } from "../src/charts/distributions.js";
import { matrixHeatmap, parallelCoordinates } from "../src/charts/matrixview.js";
import { rocChart, rocEnvelope } from "../src/charts/roc.js";
import { predFeatureScatter } from "../src/charts/scatter.js";
import { timelineChart } from "../src/charts/timeline.js";
import { initialState, reduce } from "../src/state.js";

describe("barPlot", () => {
  it("draws a mean bar and a thin std bar per row", () => {
    const svg = barPlot([
      { id: "a", label: "roi a", mean: 0.8, std: 0.1, selected: false },
      { id: "b", label: "roi b", mean: 0.6, std: 0.05, selected: true },
    ], { maxValue: 1 });
    expect(svg.match(/class="mean-bar"/g)).toHaveLength(2);
    expect(svg.match(/class="std-bar"/g)).toHaveLength(2);
    expect(svg).toContain("selected");
  });
});

describe("predFeatureScatter", () => {
  const points = [
    { scan_id: "aV1", subject_id: "a", value: 1.0, p_disease: 0.9,
      p_std: 0.02, label: "DISEASE", prediction: "DISEASE", correct: true },
    { scan_id: "aV2", subject_id: "a", value: 1.5, p_disease: 0.8,
      p_std: 0.02, label: "DISEASE", prediction: "DISEASE", correct: true },
    { scan_id: "bV1", subject_id: "b", value: 0.0, p_disease: 0.6,
      p_std: 0.10, label: "CONTROL", prediction: "DISEASE", correct: false },
  ];
  const meta = (scan: string) => ({
    subjectId: scan[0],
    firstScan: `${scan[0]}V1`,
  });

  it("draws the discrimination threshold at P = 0.5", () => {
    const svg = predFeatureScatter(points, initialState(), meta);
    const match = svg.match(/class="threshold"[^/]*y1="([\d.]+)"/);
    expect(match).not.toBeNull();
    // y scale maps [0,1] to [222, 10]: 0.5 sits exactly in the middle
    expect(Number(match![1])).toBeCloseTo((222 + 10) / 2, 0);
  });

  it("encodes correctness as shape and connects a subject's visits", () => {
    const svg = predFeatureScatter(points, initialState(), meta);
    expect(svg.match(/<circle[^>]*class="glyph"/g)).toHaveLength(2);
    expect(svg.match(/<polygon[^>]*class="glyph"/g)).toHaveLength(1);
    expect(svg.match(/class="visit-link"/g)).toHaveLength(1); // subject a
  });

  it("marks the compared subject's selected visit", () => {
    let state = initialState();
    state = reduce(state, { kind: "compare-subject", subjectId: "a", scanId: "aV2" });
    const svg = predFeatureScatter(points, state, meta);
    expect(svg).toContain("#08306b"); // left-slot border on aV2
  });
});

describe("groupHistogram", () => {
  it("uses shared edges and both group layers", () => {
    const svg = groupHistogram({
      region: 1, feature: "f", bin_edges: [0, 1, 2, 3],
      counts: { DISEASE: [1, 2, 0], CONTROL: [0, 1, 3] },
    });
    expect(svg.match(/hist-bar disease/g)).toHaveLength(3);
    expect(svg.match(/hist-bar control/g)).toHaveLength(3);
  });
});

describe("trendChart", () => {
  it("female series dotted, male solid, group colors fixed", () => {
    const svg = trendChart({
      region: 1, feature: "f", bin_years: 5,
      series: {
        "DISEASE/M": [{ age: 62.5, mean: 1, std: 0.1, n: 4 },
                      { age: 67.5, mean: 1.2, std: 0.1, n: 5 }],
        "DISEASE/F": [{ age: 62.5, mean: 0.9, std: 0.2, n: 2 },
                      { age: 67.5, mean: 1.0, std: 0.2, n: 2 }],
      },
    });
    const male = svg.match(/class="trend-line disease-m"[^/]*/)![0];
    const female = svg.match(/class="trend-line disease-f"[^/]*/)![0];
    expect(male).toContain('stroke-dasharray="none"');
    expect(female).toContain('stroke-dasharray="3 3"');
    expect(male).toContain("#e66101");
  });
});

describe("matrix + parallel coordinates share one permutation", () => {
  const payload = {
    region: 1,
    feature_names: ["f2", "f0", "f1"],   // already permuted by the server
    order: [2, 0, 1],
    cells: [
      [1.0, 0.8, 0.1],
      [0.8, 1.0, 0.2],
      [0.1, 0.2, 1.0],
    ],
    mode: "correlation",
    communities: { f2: 0, f0: 0, f1: 1 },
  };

  it("heatmap rows follow the served order and mark community bounds", () => {
    const svg = matrixHeatmap(payload);
    const rows = [...svg.matchAll(/data-row="(\w+)"/g)].map(m => m[1]);
    expect(rows.slice(0, 3)).toEqual(["f2", "f2", "f2"]);
    expect(new Set(rows)).toEqual(new Set(["f2", "f0", "f1"]));
    // one community boundary between f0 and f1 => two separator lines
    expect(svg.match(/<line[^>]*stroke="#222"/g)).toHaveLength(2);
  });

  it("parallel coordinates axes appear in the same served order", () => {
    const svg = parallelCoordinates(
      payload.feature_names,
      [{ scanId: "s1", label: "DISEASE", values: [0.1, 0.2, 0.3] },
       { scanId: "s2", label: "CONTROL", values: [0.2, null, 0.1] }],
      new Set(["s1"]),
    );
    const axes = [...svg.matchAll(/data-axis="(\w+)"/g)].map(m => m[1]);
    expect(axes).toEqual(payload.feature_names); // identical permutation
    expect(svg).toContain("pc-line disease highlighted");
    expect(svg.match(/class="pc-line/g)).toHaveLength(2);
  });
});

describe("ROC", () => {
  const roc = {
    grid_fpr: [0, 0.5, 1],
    mean_tpr: [0, 0.7, 1],
    std_tpr: [0, 0.1, 0],
    trials: [
      { fpr: [0, 0.5, 1], tpr: [0, 0.6, 1], auc: 0.7 },
      { fpr: [0, 0.5, 1], tpr: [0, 0.8, 1], auc: 0.8 },
    ],
    auc_mean: 0.75,
    auc_std: 0.05,
  };

  it("envelope is the per-trial min/max band", () => {
    const band = rocEnvelope(roc);
    expect(band.lo[1]).toBeCloseTo(0.6, 9);
    expect(band.hi[1]).toBeCloseTo(0.8, 9);
    expect(band.lo[0]).toBe(0);
    expect(band.hi[2]).toBe(1);
  });

  it("chart shows the band, the mean curve, and the AUC", () => {
    const svg = rocChart(roc);
    expect(svg).toContain("roc-band");
    expect(svg).toContain("roc-mean");
    expect(svg).toContain("AUC 0.750");
  });
});

describe("timelineChart", () => {
  const payload = {
    region: 1, subject_id: "sA", feature: "f",
    visits: [
      { scan_id: "sAv1", visit_date: "2020-01-01", value: 1.0, p_disease: 0.7 },
      { scan_id: "sAv2", visit_date: "2021-01-01", value: 1.4, p_disease: 0.8 },
      { scan_id: "sAv3", visit_date: "2022-01-01", value: 1.2, p_disease: 0.75 },
    ],
    control_reference: { mean: 1.1, std: 0.2 },
  };

  it("renders clickable visit markers with the selected one emphasized", () => {
    const svg = timelineChart(payload, "sAv2");
    expect([...svg.matchAll(/data-scan="(\w+)"/g)].map(m => m[1]))
      .toEqual(["sAv1", "sAv2", "sAv3"]);
    expect(svg).toContain('class="visit selected"');
  });

  it("draws control mean and std reference lines", () => {
    const svg = timelineChart(payload, null);
    expect(svg.match(/class="control-mean"/g)).toHaveLength(1);
    expect(svg.match(/class="control-std"/g)).toHaveLength(2);
  });
});
