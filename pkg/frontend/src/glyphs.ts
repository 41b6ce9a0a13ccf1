// Subject glyph encoding, one pure function used by every scatter-like view.
//
// Fill encodes the class (orange disease, green control), shape encodes
// prediction correctness (circle correct, triangle incorrect). Thick borders
// mark the comparison role: dark blue for the left fiber view's subject,
// dark red for the right, black for the hovered scan; the colored border
// sits only on the subject's currently selected visit, their first visit is
// grey unless selected, all other visits get no border.

import { ComparedSubject, SelectionState } from "./state.js";

export const DISEASE_FILL = "#e66101";   // orange
export const CONTROL_FILL = "#1b9e77";   // green
export const LEFT_BORDER = "#08306b";    // dark blue
export const RIGHT_BORDER = "#67000d";   // dark red
export const HOVER_BORDER = "#000000";
export const FIRST_VISIT_BORDER = "#9e9e9e";

export type GlyphShape = "circle" | "triangle";

export interface GlyphRole {
  comparedSlot: "left" | "right" | null;
  isSelectedVisit: boolean;
  isFirstVisit: boolean;
  hovered: boolean;
}

export interface Glyph {
  fill: string;
  shape: GlyphShape;
  border: string | null;
  borderWidth: number;
}

export function encodeGlyph(label: string, correct: boolean, role: GlyphRole): Glyph {
  const fill = label === "DISEASE" ? DISEASE_FILL : CONTROL_FILL;
  const shape: GlyphShape = correct ? "circle" : "triangle";

  let border: string | null = null;
  if (role.hovered) {
    border = HOVER_BORDER;
  } else if (role.comparedSlot && role.isSelectedVisit) {
    border = role.comparedSlot === "left" ? LEFT_BORDER : RIGHT_BORDER;
  } else if (role.comparedSlot && role.isFirstVisit) {
    border = FIRST_VISIT_BORDER;
  }
  return { fill, shape, border, borderWidth: border ? 2.5 : 0 };
}

/** Comparison role of one scan given the current selection. */
export function roleOf(
  state: SelectionState,
  subjectId: string,
  scanId: string,
  firstScanOfSubject: string | null,
): GlyphRole {
  const compared: ComparedSubject | undefined =
    state.compared.find(c => c.subjectId === subjectId);
  return {
    comparedSlot: compared ? compared.slot : null,
    isSelectedVisit: compared ? compared.scanId === scanId : false,
    isFirstVisit: firstScanOfSubject === scanId,
    hovered: state.hoverScan === scanId,
  };
}
