// Fiber color scales: the contrastive acceptance check is that a scan equal
// to the control mean (all differences zero) maps entirely into the neutral
// band of the diverging scale.

import { describe, expect, it } from "vitest";
import { diverging, fiberColorScale, isNeutral, neutralDistance, sequential, toCss } from "../src/color.js";

describe("diverging map", () => {
  it("is neutral at the midpoint and saturated at the ends", () => {
    expect(neutralDistance(diverging(0.5))).toBeLessThan(1e-9);
    expect(isNeutral(diverging(0.0))).toBe(false);
    expect(isNeutral(diverging(1.0))).toBe(false);
  });

  it("is blue below and red above the midpoint", () => {
    const below = diverging(0.05);
    const above = diverging(0.95);
    expect(below[2]).toBeGreaterThan(below[0]); // blue dominates
    expect(above[0]).toBeGreaterThan(above[2]); // red dominates
  });
});

describe("fiberColorScale", () => {
  it("contrastive mode: zero difference lands in the neutral band", () => {
    // a scan identical to the control mean yields all-zero contrastive
    // values; with any symmetric range they all map to neutral colors
    const scale = fiberColorScale("contrastive", [-0.3, 0.4]);
    const vertexValues = new Array(200).fill(0);
    for (const value of vertexValues) {
      expect(isNeutral(scale(value))).toBe(true);
    }
    // tiny differences stay in the band too
    expect(isNeutral(scale(0.004))).toBe(true);
    // large differences leave it
    expect(isNeutral(scale(0.4))).toBe(false);
    expect(isNeutral(scale(-0.3))).toBe(false);
  });

  it("contrastive domain is symmetric around zero", () => {
    const scale = fiberColorScale("contrastive", [-0.1, 0.5]);
    expect(scale.domain[0]).toBeCloseTo(-0.5, 12);
    expect(scale.domain[1]).toBeCloseTo(0.5, 12);
  });

  it("direct mode spans the given range monotonically in luminance-ish", () => {
    const scale = fiberColorScale("direct", [2, 6]);
    expect(scale.domain).toEqual([2, 6]);
    const lo = scale(2);
    const hi = scale(6);
    expect(lo).not.toEqual(hi);
    expect(scale(1)).toEqual(lo);   // clamped below
    expect(scale(7)).toEqual(hi);   // clamped above
  });

  it("the shared cohort range keeps two scans on one scale", () => {
    const scale = fiberColorScale("direct", [0, 1]);
    // same value in different scans gets the same color by construction
    expect(scale(0.5)).toEqual(scale(0.5));
    expect(toCss(scale(0.5))).toMatch(/^rgb\(/);
  });
});

describe("sequential map", () => {
  it("clamps and interpolates", () => {
    expect(sequential(-1)).toEqual(sequential(0));
    expect(sequential(2)).toEqual(sequential(1));
    const mid = sequential(0.5);
    expect(mid.every(c => c >= 0 && c <= 1)).toBe(true);
  });
});
