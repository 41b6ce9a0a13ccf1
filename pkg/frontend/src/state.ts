// The single source of truth for every linked view.
//
// All views render from (SelectionState, server payloads) and nothing else;
// interactions dispatch actions here and subscribers re-derive. Constraints:
// at most two compared subjects (left/right fiber view slots), one selected
// visit per compared subject, at most one hover target.

export type Slot = "left" | "right";

export interface ComparedSubject {
  subjectId: string;
  scanId: string;       // currently selected visit
  slot: Slot;
}

export interface SelectionState {
  region: number | null;
  feature: string | null;
  compared: ComparedSubject[];   // length <= 2, slots unique
  hoverScan: string | null;
  cameraLinked: boolean;
  colorMode: "direct" | "contrastive";
  logScale: boolean;
  tubeRadius: number;
  matrixMode: "covariance" | "correlation";
  splitTrendsBySex: boolean;
}

export function initialState(): SelectionState {
  return {
    region: null,
    feature: null,
    compared: [],
    hoverScan: null,
    cameraLinked: false,
    colorMode: "direct",
    logScale: false,
    tubeRadius: 0.5,
    matrixMode: "covariance",
    splitTrendsBySex: false,
  };
}

export type Action =
  | { kind: "select-region"; region: number }
  | { kind: "select-feature"; feature: string }
  | { kind: "compare-subject"; subjectId: string; scanId: string; slot?: Slot }
  | { kind: "select-visit"; subjectId: string; scanId: string }
  | { kind: "clear-comparison"; slot: Slot }
  | { kind: "hover"; scanId: string | null }
  | { kind: "set-camera-link"; linked: boolean }
  | { kind: "set-color-mode"; mode: "direct" | "contrastive" }
  | { kind: "set-log-scale"; enabled: boolean }
  | { kind: "set-tube-radius"; radius: number }
  | { kind: "set-matrix-mode"; mode: "covariance" | "correlation" }
  | { kind: "set-trend-split"; bySex: boolean };

export function reduce(state: SelectionState, action: Action): SelectionState {
  switch (action.kind) {
    case "select-region":
      if (action.region === state.region) return state;
      // feature saliency is per region: a region switch resets the feature
      return { ...state, region: action.region, feature: null };
    case "select-feature":
      return { ...state, feature: action.feature };
    case "compare-subject": {
      const existing = state.compared.find(c => c.subjectId === action.subjectId);
      if (existing) {
        // re-selecting an already-compared subject just switches its visit
        return reduce(state, {
          kind: "select-visit",
          subjectId: action.subjectId,
          scanId: action.scanId,
        });
      }
      const slot = action.slot ?? nextSlot(state.compared);
      const kept = state.compared.filter(c => c.slot !== slot);
      return {
        ...state,
        compared: [...kept, { subjectId: action.subjectId, scanId: action.scanId, slot }],
      };
    }
    case "select-visit": {
      const compared = state.compared.map(c =>
        c.subjectId === action.subjectId ? { ...c, scanId: action.scanId } : c
      );
      return { ...state, compared };
    }
    case "clear-comparison":
      return { ...state, compared: state.compared.filter(c => c.slot !== action.slot) };
    case "hover":
      return state.hoverScan === action.scanId
        ? state
        : { ...state, hoverScan: action.scanId };
    case "set-camera-link":
      return { ...state, cameraLinked: action.linked };
    case "set-color-mode":
      return { ...state, colorMode: action.mode };
    case "set-log-scale":
      return { ...state, logScale: action.enabled };
    case "set-tube-radius":
      return { ...state, tubeRadius: action.radius };
    case "set-matrix-mode":
      return { ...state, matrixMode: action.mode };
    case "set-trend-split":
      return { ...state, splitTrendsBySex: action.bySex };
  }
}

function nextSlot(compared: ComparedSubject[]): Slot {
  const used = new Set(compared.map(c => c.slot));
  if (!used.has("left")) return "left";
  if (!used.has("right")) return "right";
  return "right"; // both occupied: replace the right view
}

export type Listener = (state: SelectionState, action: Action) => void;

export class Store {
  private state: SelectionState;
  private listeners: Listener[] = [];

  constructor(state: SelectionState = initialState()) {
    this.state = state;
  }

  get current(): SelectionState {
    return this.state;
  }

  dispatch(action: Action): SelectionState {
    const next = reduce(this.state, action);
    if (next !== this.state) {
      this.state = next;
      for (const listener of this.listeners) listener(next, action);
    }
    return next;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter(l => l !== listener);
    };
  }
}
