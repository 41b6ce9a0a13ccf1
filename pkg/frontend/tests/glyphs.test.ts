// Glyph encoding is a pure function of (label, correctness, comparison role);
// the full legend table is asserted combination by combination.

import { describe, expect, it } from "vitest";
import {
  CONTROL_FILL,
  DISEASE_FILL,
  FIRST_VISIT_BORDER,
  HOVER_BORDER,
  LEFT_BORDER,
  RIGHT_BORDER,
  encodeGlyph,
  roleOf,
} from "../src/glyphs.js";
import { initialState, reduce } from "../src/state.js";

const NO_ROLE = {
  comparedSlot: null, isSelectedVisit: false, isFirstVisit: false,
  hovered: false,
} as const;

describe("encodeGlyph legend", () => {
  it("fill encodes the class: orange disease, green control", () => {
    expect(encodeGlyph("DISEASE", true, NO_ROLE).fill).toBe(DISEASE_FILL);
    expect(encodeGlyph("CONTROL", true, NO_ROLE).fill).toBe(CONTROL_FILL);
  });

  it("shape encodes correctness: circle correct, triangle incorrect", () => {
    expect(encodeGlyph("DISEASE", true, NO_ROLE).shape).toBe("circle");
    expect(encodeGlyph("DISEASE", false, NO_ROLE).shape).toBe("triangle");
    expect(encodeGlyph("CONTROL", false, NO_ROLE).shape).toBe("triangle");
  });

  it("covers every label x correctness x role combination", () => {
    for (const label of ["DISEASE", "CONTROL"]) {
      for (const correct of [true, false]) {
        for (const slot of [null, "left", "right"] as const) {
          for (const selected of [true, false]) {
            for (const first of [true, false]) {
              for (const hovered of [true, false]) {
                const glyph = encodeGlyph(label, correct, {
                  comparedSlot: slot,
                  isSelectedVisit: selected,
                  isFirstVisit: first,
                  hovered,
                });
                expect(glyph.fill)
                  .toBe(label === "DISEASE" ? DISEASE_FILL : CONTROL_FILL);
                expect(glyph.shape).toBe(correct ? "circle" : "triangle");
                if (hovered) {
                  expect(glyph.border).toBe(HOVER_BORDER);
                } else if (slot && selected) {
                  expect(glyph.border)
                    .toBe(slot === "left" ? LEFT_BORDER : RIGHT_BORDER);
                } else if (slot && first) {
                  // compared subject's first visit is grey unless selected
                  expect(glyph.border).toBe(FIRST_VISIT_BORDER);
                } else {
                  expect(glyph.border).toBeNull();
                  expect(glyph.borderWidth).toBe(0);
                }
              }
            }
          }
        }
      }
    }
  });
});

describe("roleOf", () => {
  it("marks only the compared subject's selected visit", () => {
    let state = initialState();
    state = reduce(state, {
      kind: "compare-subject", subjectId: "s1", scanId: "s1v2",
    });
    expect(roleOf(state, "s1", "s1v2", "s1v1")).toMatchObject({
      comparedSlot: "left", isSelectedVisit: true, isFirstVisit: false,
    });
    expect(roleOf(state, "s1", "s1v1", "s1v1")).toMatchObject({
      comparedSlot: "left", isSelectedVisit: false, isFirstVisit: true,
    });
    expect(roleOf(state, "s2", "s2v1", "s2v1").comparedSlot).toBeNull();
  });

  it("propagates the hover target", () => {
    let state = initialState();
    state = reduce(state, { kind: "hover", scanId: "s9v1" });
    expect(roleOf(state, "s9", "s9v1", "s9v1").hovered).toBe(true);
    expect(roleOf(state, "s9", "s9v2", "s9v1").hovered).toBe(false);
  });
});
