// Selection-state semantics and the cross-view linking contract: after any
// scripted interaction sequence, every derived view agrees with the state.

import { describe, expect, it } from "vitest";
import {
  FeatureEntry,
  RegionEntry,
  ScanEntry,
  SubjectsPayload,
} from "../src/api.js";
import { Action, Store, initialState, reduce } from "../src/state.js";
import {
  DataBundle,
  checkConsistency,
  deriveSnapshot,
  effectiveFeature,
  effectiveRegion,
} from "../src/viewmodels.js";

function regions(): RegionEntry[] {
  return [3, 1, 2].map((region, i) => ({
    region,
    name: `roi${region}`,
    error: null,
    accuracy_mean: 0.9 - i * 0.1,
    accuracy_std: 0.05,
    performance: null,
  }));
}

function features(): FeatureEntry[] {
  return ["MFA_all", "MMO_all", "AFL_intra"].map((name, i) => ({
    name,
    importance_mean: 0.3 - i * 0.05,
    importance_std: 0.02,
    p_value: 0.01 * (i + 1),
  }));
}

function scan(subject: string, visit: number, label: string,
              correct = true): ScanEntry {
  return {
    scan_id: `${subject}v${visit}`,
    subject_id: subject,
    label,
    p_mean: label === "DISEASE" ? 0.8 : 0.2,
    p_std: 0.05,
    prediction: correct === (label === "DISEASE") ? "DISEASE" : "CONTROL",
    correct,
    visit_date: `2020-0${visit}-01`,
    age: 65 + visit,
    sex: "M",
  };
}

function subjects(region: number): SubjectsPayload {
  return {
    region,
    scans: [
      scan("sA", 1, "DISEASE"), scan("sA", 2, "DISEASE"),
      scan("sB", 1, "CONTROL", false), scan("sB", 2, "CONTROL"),
      scan("sC", 1, "DISEASE"),
    ],
  };
}

function bundleFor(state: ReturnType<typeof initialState>): DataBundle {
  const region = effectiveRegion(state, regions()) ?? 3;
  return {
    regions: regions(),
    features: features(),
    subjects: subjects(region),
  };
}

describe("reducer semantics", () => {
  it("selecting a region resets the feature", () => {
    let state = initialState();
    state = reduce(state, { kind: "select-feature", feature: "MMO_all" });
    state = reduce(state, { kind: "select-region", region: 2 });
    expect(state.region).toBe(2);
    expect(state.feature).toBeNull();
  });

  it("keeps at most two compared subjects with distinct slots", () => {
    let state = initialState();
    state = reduce(state, { kind: "compare-subject", subjectId: "sA", scanId: "sAv1" });
    state = reduce(state, { kind: "compare-subject", subjectId: "sB", scanId: "sBv1" });
    expect(state.compared.map(c => c.slot).sort()).toEqual(["left", "right"]);
    // a third subject replaces the right slot
    state = reduce(state, { kind: "compare-subject", subjectId: "sC", scanId: "sCv1" });
    expect(state.compared).toHaveLength(2);
    expect(state.compared.find(c => c.slot === "right")?.subjectId).toBe("sC");
    expect(state.compared.find(c => c.slot === "left")?.subjectId).toBe("sA");
  });

  it("re-selecting a compared subject switches its visit, not its slot", () => {
    let state = initialState();
    state = reduce(state, { kind: "compare-subject", subjectId: "sA", scanId: "sAv1" });
    state = reduce(state, { kind: "compare-subject", subjectId: "sA", scanId: "sAv2" });
    expect(state.compared).toHaveLength(1);
    expect(state.compared[0]).toMatchObject({ slot: "left", scanId: "sAv2" });
  });

  it("tracks at most one hover target", () => {
    let state = initialState();
    state = reduce(state, { kind: "hover", scanId: "x" });
    state = reduce(state, { kind: "hover", scanId: "y" });
    expect(state.hoverScan).toBe("y");
    state = reduce(state, { kind: "hover", scanId: null });
    expect(state.hoverScan).toBeNull();
  });

  it("store notifies subscribers only on change", () => {
    const store = new Store();
    const seen: Action[] = [];
    store.subscribe((_, action) => seen.push(action));
    store.dispatch({ kind: "hover", scanId: null }); // no-op
    store.dispatch({ kind: "hover", scanId: "a" });
    expect(seen).toHaveLength(1);
  });
});

describe("effective selections", () => {
  it("defaults to the top-saliency region and top feature", () => {
    const state = initialState();
    expect(effectiveRegion(state, regions())).toBe(3);
    expect(effectiveFeature(state, features())).toBe("MFA_all");
  });

  it("explicit selections win", () => {
    let state = initialState();
    state = reduce(state, { kind: "select-region", region: 1 });
    state = reduce(state, { kind: "select-feature", feature: "AFL_intra" });
    expect(effectiveRegion(state, regions())).toBe(1);
    expect(effectiveFeature(state, features())).toBe("AFL_intra");
  });
});

describe("linking contract", () => {
  it("the scripted acceptance sequence keeps every view consistent", () => {
    // select region -> select feature -> compare two subjects -> click a
    // timeline visit; after every step the derived snapshot must agree
    const script: Action[] = [
      { kind: "select-region", region: 1 },
      { kind: "select-feature", feature: "MMO_all" },
      { kind: "compare-subject", subjectId: "sA", scanId: "sAv1" },
      { kind: "compare-subject", subjectId: "sB", scanId: "sBv1" },
      { kind: "select-visit", subjectId: "sA", scanId: "sAv2" },
    ];
    let state = initialState();
    for (const action of script) {
      state = reduce(state, action);
      const data = bundleFor(state);
      const snapshot = deriveSnapshot(state, data);
      expect(checkConsistency(state, data, snapshot)).toEqual([]);
    }
    // final pose: both fiber views show the chosen visits
    const snapshot = deriveSnapshot(state, bundleFor(state));
    expect(snapshot.fiberViews[0]).toMatchObject({
      slot: "left", subjectId: "sA", scanId: "sAv2", region: 1,
    });
    expect(snapshot.fiberViews[1]).toMatchObject({
      slot: "right", subjectId: "sB", scanId: "sBv1", region: 1,
    });
    expect(snapshot.timelineSubjects).toEqual([
      { slot: "left", subjectId: "sA", selectedScan: "sAv2" },
      { slot: "right", subjectId: "sB", selectedScan: "sBv1" },
    ]);
  });

  it("random interaction sequences never desynchronize the views", () => {
    const actions: Action[] = [
      { kind: "select-region", region: 2 },
      { kind: "select-region", region: 3 },
      { kind: "select-feature", feature: "AFL_intra" },
      { kind: "compare-subject", subjectId: "sC", scanId: "sCv1" },
      { kind: "compare-subject", subjectId: "sA", scanId: "sAv2" },
      { kind: "select-visit", subjectId: "sA", scanId: "sAv1" },
      { kind: "hover", scanId: "sBv2" },
      { kind: "hover", scanId: null },
      { kind: "clear-comparison", slot: "left" },
      { kind: "set-color-mode", mode: "contrastive" },
      { kind: "set-log-scale", enabled: true },
      { kind: "set-tube-radius", radius: 1.2 },
    ];
    // pseudo-random walk over the action vocabulary, fixed seed
    let seed = 1234;
    const next = () => (seed = (seed * 1103515245 + 12345) % 2 ** 31);
    let state = initialState();
    for (let step = 0; step < 300; step++) {
      const action = actions[next() % actions.length];
      state = reduce(state, action);
      const data = bundleFor(state);
      const snapshot = deriveSnapshot(state, data);
      expect(checkConsistency(state, data, snapshot)).toEqual([]);
      expect(state.compared.length).toBeLessThanOrEqual(2);
    }
  });

  it("hovering highlights the same scan in every glyph view", () => {
    let state = initialState();
    state = reduce(state, { kind: "hover", scanId: "sAv2" });
    const snapshot = deriveSnapshot(state, bundleFor(state));
    const marked = snapshot.subjectRows.filter(r => r.glyph.border === "#000000");
    expect(marked.map(r => r.scan.scan_id)).toEqual(["sAv2"]);
    expect(snapshot.hoverScan).toBe("sAv2");
  });
});
