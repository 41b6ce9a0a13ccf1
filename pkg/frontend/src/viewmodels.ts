// Pure derivations from (SelectionState, server payloads) to what each view
// renders. Every linked view goes through here, so "views agree with the
// selection" is checkable by deriving a snapshot and testing its internal
// consistency, with no DOM involved.

import {
  FeatureEntry,
  PredFeaturePayload,
  ProjectionPayload,
  RegionEntry,
  ScanEntry,
  SubjectsPayload,
} from "./api.js";
import { Glyph, encodeGlyph, roleOf } from "./glyphs.js";
import { SelectionState, Slot } from "./state.js";

export interface DataBundle {
  regions: RegionEntry[];
  features: FeatureEntry[];        // for the effective region
  subjects: SubjectsPayload;       // for the effective region
  projection?: ProjectionPayload;
  predFeature?: PredFeaturePayload;
}

/** Region shown everywhere: the explicit selection or the top-saliency one. */
export function effectiveRegion(state: SelectionState,
                                regions: RegionEntry[]): number | null {
  if (state.region !== null) return state.region;
  const best = regions.find(r => r.error === null);
  return best ? best.region : null;
}

/** Feature shown in feature-linked views: explicit or top importance. */
export function effectiveFeature(state: SelectionState,
                                 features: FeatureEntry[]): string | null {
  if (state.feature !== null) return state.feature;
  return features.length ? features[0].name : null;
}

export interface SubjectRowModel {
  scan: ScanEntry;
  glyph: Glyph;
  comparedSlot: Slot | null;
}

export interface FiberViewModel {
  slot: Slot;
  subjectId: string | null;
  scanId: string | null;           // selected visit rendered in this view
  region: number | null;           // isolation scope
  colorMode: "direct" | "contrastive";
  logScale: boolean;
  tubeRadius: number;
}

export interface ViewSnapshot {
  region: number | null;
  feature: string | null;
  subjectRows: SubjectRowModel[];
  fiberViews: [FiberViewModel, FiberViewModel];
  hoverScan: string | null;
  timelineSubjects: { slot: Slot; subjectId: string; selectedScan: string }[];
}

export function firstScanBySubject(scans: ScanEntry[]): Map<string, string> {
  const first = new Map<string, string>();
  const sorted = [...scans].sort((a, b) =>
    (a.visit_date ?? "").localeCompare(b.visit_date ?? "") ||
    a.scan_id.localeCompare(b.scan_id));
  for (const scan of sorted) {
    if (!first.has(scan.subject_id)) first.set(scan.subject_id, scan.scan_id);
  }
  return first;
}

export function deriveSnapshot(state: SelectionState, data: DataBundle): ViewSnapshot {
  const region = effectiveRegion(state, data.regions);
  const feature = effectiveFeature(state, data.features);
  const firstScans = firstScanBySubject(data.subjects.scans);

  const subjectRows = data.subjects.scans.map(scan => {
    const role = roleOf(state, scan.subject_id, scan.scan_id,
                        firstScans.get(scan.subject_id) ?? null);
    return {
      scan,
      glyph: encodeGlyph(scan.label, scan.correct, role),
      comparedSlot: role.comparedSlot,
    };
  });

  const fiberViews = (["left", "right"] as Slot[]).map(slot => {
    const compared = state.compared.find(c => c.slot === slot);
    return {
      slot,
      subjectId: compared?.subjectId ?? null,
      scanId: compared?.scanId ?? null,
      region,
      colorMode: state.colorMode,
      logScale: state.logScale,
      tubeRadius: state.tubeRadius,
    };
  }) as [FiberViewModel, FiberViewModel];

  const timelineSubjects = state.compared.map(c => ({
    slot: c.slot,
    subjectId: c.subjectId,
    selectedScan: c.scanId,
  }));

  return {
    region,
    feature,
    subjectRows,
    fiberViews,
    hoverScan: state.hoverScan,
    timelineSubjects,
  };
}

/**
 * Cross-view consistency: returns a list of violations (empty = consistent).
 * Used by the linking-contract tests after scripted interaction sequences.
 */
export function checkConsistency(state: SelectionState, data: DataBundle,
                                 snapshot: ViewSnapshot): string[] {
  const problems: string[] = [];
  if (snapshot.region !== effectiveRegion(state, data.regions)) {
    problems.push("snapshot region diverged from selection");
  }
  if (snapshot.feature !== effectiveFeature(state, data.features)) {
    problems.push("snapshot feature diverged from selection");
  }
  if (data.subjects.region !== snapshot.region && data.subjects.scans.length) {
    problems.push("subject module serves a different region than selected");
  }
  for (const view of snapshot.fiberViews) {
    const compared = state.compared.find(c => c.slot === view.slot);
    if ((compared?.scanId ?? null) !== view.scanId) {
      problems.push(`fiber view ${view.slot} shows a non-selected scan`);
    }
    if (view.region !== snapshot.region) {
      problems.push(`fiber view ${view.slot} isolates a different region`);
    }
    if (view.colorMode !== state.colorMode || view.logScale !== state.logScale) {
      problems.push(`fiber view ${view.slot} ignores the color settings`);
    }
  }
  // glyph borders must mark exactly the compared subjects' selected visits
  // (plus the hovered scan, which overrides)
  for (const row of snapshot.subjectRows) {
    const compared = state.compared.find(c => c.subjectId === row.scan.subject_id);
    const hovered = state.hoverScan === row.scan.scan_id;
    const expectSlotBorder =
      compared !== undefined && compared.scanId === row.scan.scan_id && !hovered;
    const hasSlotBorder =
      row.glyph.border === "#08306b" || row.glyph.border === "#67000d";
    if (expectSlotBorder !== hasSlotBorder) {
      problems.push(`glyph border wrong for scan ${row.scan.scan_id}`);
    }
    if (hovered && row.glyph.border !== "#000000") {
      problems.push(`hovered scan ${row.scan.scan_id} not marked`);
    }
  }
  for (const timeline of snapshot.timelineSubjects) {
    const compared = state.compared.find(c => c.slot === timeline.slot);
    if (!compared || compared.scanId !== timeline.selectedScan) {
      problems.push(`timeline for ${timeline.slot} out of sync`);
    }
  }
  if (data.predFeature && data.predFeature.region !== snapshot.region
      && data.predFeature.points.length) {
    problems.push("scatter serves a different region than selected");
  }
  return problems;
}
