// DOM panels: the three exploration modules (table/plot toggle), the
// pipeline panel with its collapsible results, and the cohort panel.
// All rendering is innerHTML from the pure chart builders; interactions
// dispatch store actions via event delegation.

import { FeatureEntry, RegionEntry, ScanEntry } from "./api.js";
import { BarDatum, barPlot } from "./charts/bars.js";
import { esc, svgDoc, tag, trianglePoints } from "./charts/svg.js";
import { encodeGlyph, roleOf } from "./glyphs.js";
import { SelectionState, Store } from "./state.js";
import { firstScanBySubject } from "./viewmodels.js";

type Mode = "table" | "plot";

abstract class ExplorationModule<T> {
  protected mode: Mode = "table";
  protected data: T[] = [];

  constructor(protected root: HTMLElement, protected store: Store,
              private title: string) {
    root.classList.add("module");
    root.addEventListener("click", e => this.onClick(e));
  }

  setData(data: T[]): void {
    this.data = data;
    this.render(this.store.current);
  }

  render(state: SelectionState): void {
    const toggle =
      `<div class="module-head"><span>${esc(this.title)}</span>` +
      `<button class="toggle" data-mode="${this.mode === "table" ? "plot" : "table"}">` +
      `${this.mode === "table" ? "plot" : "table"}</button></div>`;
    const body = this.mode === "table" ? this.tableHtml(state) : this.plotHtml(state);
    this.root.innerHTML = toggle + `<div class="module-body">${body}</div>`;
  }

  private onClick(e: Event): void {
    const target = e.target as HTMLElement;
    const toggle = target.closest(".toggle") as HTMLElement | null;
    if (toggle) {
      // toggling the presentation preserves the data and its sort order
      this.mode = toggle.dataset.mode as Mode;
      this.render(this.store.current);
      return;
    }
    this.onBodyClick(target, e);
  }

  protected abstract tableHtml(state: SelectionState): string;
  protected abstract plotHtml(state: SelectionState): string;
  protected abstract onBodyClick(target: HTMLElement, event: Event): void;
}

export class RegionModule extends ExplorationModule<RegionEntry> {
  constructor(root: HTMLElement, store: Store) {
    super(root, store, "Regions");
  }

  protected tableHtml(state: SelectionState): string {
    const rows = this.data.map(r => {
      const selected = state.region === r.region ? " selected" : "";
      const mean = r.accuracy_mean === null ? "-" : r.accuracy_mean.toFixed(3);
      const std = r.accuracy_std === null ? "-" : r.accuracy_std.toFixed(3);
      return `<tr class="row${selected}" data-region="${r.region}">` +
             `<td>${esc(r.name)}</td><td>${mean}</td><td>${std}</td></tr>`;
    }).join("");
    return `<table><thead><tr><th>region</th><th>mean</th><th>std</th></tr></thead>` +
           `<tbody>${rows}</tbody></table>`;
  }

  protected plotHtml(state: SelectionState): string {
    const bars: BarDatum[] = this.data
      .filter(r => r.error === null)
      .map(r => ({
        id: String(r.region),
        label: r.name,
        mean: r.accuracy_mean ?? 0,
        std: r.accuracy_std ?? 0,
        selected: state.region === r.region,
      }));
    return barPlot(bars, { maxValue: 1 });
  }

  protected onBodyClick(target: HTMLElement): void {
    const row = target.closest("[data-region],[data-id]") as HTMLElement | null;
    if (!row) return;
    const region = Number(row.dataset.region ?? row.dataset.id);
    if (Number.isFinite(region)) {
      this.store.dispatch({ kind: "select-region", region });
    }
  }
}

export class FeatureModule extends ExplorationModule<FeatureEntry> {
  constructor(root: HTMLElement, store: Store) {
    super(root, store, "Features");
  }

  protected tableHtml(state: SelectionState): string {
    const rows = this.data.map(f => {
      const selected = state.feature === f.name ? " selected" : "";
      return `<tr class="row${selected}" data-feature="${esc(f.name)}">` +
             `<td>${esc(f.name)}</td><td>${f.importance_mean.toFixed(4)}</td>` +
             `<td>${f.importance_std.toFixed(4)}</td>` +
             `<td>${f.p_value.toExponential(2)}</td></tr>`;
    }).join("");
    return `<table><thead><tr><th>feature</th><th>importance</th><th>std</th>` +
           `<th>p</th></tr></thead><tbody>${rows}</tbody></table>`;
  }

  protected plotHtml(state: SelectionState): string {
    const bars: BarDatum[] = this.data.slice(0, 20).map(f => ({
      id: f.name,
      label: f.name,
      mean: f.importance_mean,
      std: f.importance_std,
      selected: state.feature === f.name,
    }));
    return barPlot(bars);
  }

  protected onBodyClick(target: HTMLElement): void {
    const row = target.closest("[data-feature],[data-id]") as HTMLElement | null;
    if (!row) return;
    const feature = row.dataset.feature ?? row.dataset.id;
    if (feature) this.store.dispatch({ kind: "select-feature", feature });
  }
}

export class SubjectModule extends ExplorationModule<ScanEntry> {
  private groupBySubject = false;

  constructor(root: HTMLElement, store: Store) {
    super(root, store, "Subjects");
    root.addEventListener("mouseover", e => {
      const row = (e.target as HTMLElement).closest("[data-scan]") as HTMLElement | null;
      if (row) this.store.dispatch({ kind: "hover", scanId: row.dataset.scan! });
    });
    root.addEventListener("mouseleave", () => {
      this.store.dispatch({ kind: "hover", scanId: null });
    });
  }

  private ordered(): ScanEntry[] {
    if (!this.groupBySubject) return this.data;
    // group a subject's visits together, groups sorted by mean prediction,
    // visits by date
    const groups = new Map<string, ScanEntry[]>();
    for (const scan of this.data) {
      const list = groups.get(scan.subject_id) ?? [];
      list.push(scan);
      groups.set(scan.subject_id, list);
    }
    const averaged = [...groups.entries()].map(([subject, scans]) => ({
      subject,
      mean: scans.reduce((s, x) => s + x.p_mean, 0) / scans.length,
      scans: [...scans].sort((a, b) =>
        (a.visit_date ?? "").localeCompare(b.visit_date ?? "")),
    }));
    averaged.sort((a, b) => b.mean - a.mean);
    return averaged.flatMap(g => g.scans);
  }

  protected tableHtml(state: SelectionState): string {
    const rows = this.ordered().map(s => {
      const compared = state.compared.find(c => c.subjectId === s.subject_id);
      const cls = compared ? ` compared-${compared.slot}` : "";
      return `<tr class="row${cls}" data-scan="${esc(s.scan_id)}" ` +
             `data-subject="${esc(s.subject_id)}">` +
             `<td>${esc(s.subject_id)}</td><td>${esc(s.visit_date ?? "")}</td>` +
             `<td>${s.p_mean.toFixed(3)}</td><td>${s.p_std.toFixed(3)}</td>` +
             `<td>${s.prediction === "DISEASE" ? "D" : "C"}` +
             `${s.correct ? "" : " ✗"}</td></tr>`;
    }).join("");
    const grouping =
      `<label class="grouping"><input type="checkbox" class="group-toggle"` +
      `${this.groupBySubject ? " checked" : ""}/> group visits</label>`;
    return grouping +
           `<table><thead><tr><th>subject</th><th>visit</th><th>P(d)</th>` +
           `<th>std</th><th>pred</th></tr></thead><tbody>${rows}</tbody></table>`;
  }

  protected plotHtml(state: SelectionState): string {
    const scans = this.ordered();
    const rowHeight = 14;
    const width = 330;
    const firstScans = firstScanBySubject(scans);
    const body = scans.map((s, i) => {
      const role = roleOf(state, s.subject_id, s.scan_id,
                          firstScans.get(s.subject_id) ?? null);
      const glyph = encodeGlyph(s.label, s.correct, role);
      const cx = 120 + s.p_mean * 170;
      const cy = i * rowHeight + rowHeight / 2;
      const mark = glyph.shape === "circle"
        ? tag("circle", {
            class: "glyph", "data-scan": s.scan_id, "data-subject": s.subject_id,
            cx, cy, r: 4.5, fill: glyph.fill,
            stroke: glyph.border ?? "none", "stroke-width": glyph.borderWidth,
          })
        : tag("polygon", {
            class: "glyph", "data-scan": s.scan_id, "data-subject": s.subject_id,
            points: trianglePoints(cx, cy, 4.5), fill: glyph.fill,
            stroke: glyph.border ?? "none", "stroke-width": glyph.borderWidth,
          });
      // thin gray bar encodes the prediction uncertainty
      const std = tag("rect", {
        class: "std-bar",
        x: 120 + Math.max(0, s.p_mean - s.p_std) * 170,
        y: cy - 1,
        width: Math.max(0.5, (Math.min(1, s.p_mean + s.p_std)
                              - Math.max(0, s.p_mean - s.p_std)) * 170),
        height: 2, fill: "#999",
      });
      const label = tag("text", {
        x: 114, y: cy + 3, "text-anchor": "end", "font-size": 8,
      }, esc(`${s.subject_id} ${s.visit_date ?? ""}`));
      return label + std + mark;
    }).join("");
    return svgDoc(width, Math.max(1, scans.length) * rowHeight, body,
                  "chart subject-plot");
  }

  protected onBodyClick(target: HTMLElement, event: Event): void {
    const toggle = target.closest(".group-toggle");
    if (toggle) {
      this.groupBySubject = (toggle as HTMLInputElement).checked;
      this.render(this.store.current);
      return;
    }
    const row = target.closest("[data-scan]") as HTMLElement | null;
    if (!row) return;
    const slot = (event as MouseEvent).altKey ? "right" : undefined;
    this.store.dispatch({
      kind: "compare-subject",
      subjectId: row.dataset.subject!,
      scanId: row.dataset.scan!,
      slot,
    });
  }
}

export interface PipelineCallbacks {
  start(config: Record<string, unknown>): void;
}

export class PipelinePanel {
  private collapsed = false;
  private progressHtml = "";
  private resultsHtml = "";

  constructor(private root: HTMLElement, private callbacks: PipelineCallbacks) {
    root.classList.add("pipeline-panel");
    this.render();
    root.addEventListener("click", e => {
      const target = e.target as HTMLElement;
      if (target.closest(".run-button")) this.start();
      if (target.closest(".collapse-toggle")) {
        // results can collapse to give the exploration modules more room
        this.collapsed = !this.collapsed;
        this.render();
      }
    });
  }

  private start(): void {
    const value = (name: string, fallback: number) => {
      const input = this.root.querySelector<HTMLInputElement>(`[name=${name}]`);
      const parsed = input ? Number(input.value) : NaN;
      return Number.isFinite(parsed) ? parsed : fallback;
    };
    const topM = this.root.querySelector<HTMLInputElement>("[name=top_m]");
    const config: Record<string, unknown> = {
      k: value("k", 5),
      c: value("c", 10),
      n_trees: value("n_trees", 150),
      seed: value("seed", 0),
    };
    if (topM && topM.value && topM.value !== "sqrt") {
      config.top_m = Number(topM.value);
    }
    this.callbacks.start(config);
  }

  setProgress(done: number, total: number, state: string): void {
    const pct = total ? Math.round((100 * done) / total) : 0;
    this.progressHtml =
      `<div class="progress"><div class="progress-fill" style="width:${pct}%"></div>` +
      `<span>${state} ${done}/${total}</span></div>`;
    this.render();
  }

  setResults(html: string): void {
    this.resultsHtml = html;
    this.render();
  }

  private render(): void {
    const form =
      `<div class="config-form">` +
      `<label>k <input name="k" type="number" value="5" min="2"/></label>` +
      `<label>c <input name="c" type="number" value="10" min="1"/></label>` +
      `<label>trees <input name="n_trees" type="number" value="150" min="1" max="1500"/></label>` +
      `<label>top-m <input name="top_m" value="sqrt"/></label>` +
      `<label>seed <input name="seed" type="number" value="0"/></label>` +
      `<button class="run-button">run</button></div>`;
    const results = this.collapsed
      ? ""
      : `<div class="results">${this.resultsHtml}</div>`;
    this.root.innerHTML =
      `<div class="module-head"><span>Pipeline</span>` +
      `<button class="collapse-toggle">${this.collapsed ? "expand" : "collapse"}</button></div>` +
      form + this.progressHtml + results;
  }
}

export interface CohortCallbacks {
  select(body: Record<string, unknown>): void;
}

export class CohortPanel {
  private demographicsHtml = "";

  constructor(private root: HTMLElement, private callbacks: CohortCallbacks) {
    root.classList.add("cohort-panel");
    this.render();
    root.addEventListener("click", e => {
      if ((e.target as HTMLElement).closest(".select-button")) this.select();
    });
  }

  private select(): void {
    const input = (name: string) =>
      this.root.querySelector<HTMLInputElement>(`[name=${name}]`);
    const body: Record<string, unknown> = {
      balance: input("balance")?.checked ?? false,
      seed: Number(input("seed")?.value ?? 0) || 0,
    };
    const lo = Number(input("age_min")?.value);
    const hi = Number(input("age_max")?.value);
    if (Number.isFinite(lo) && input("age_min")?.value) body.age_min = lo;
    if (Number.isFinite(hi) && input("age_max")?.value) body.age_max = hi;
    this.callbacks.select(body);
  }

  setDemographics(html: string): void {
    this.demographicsHtml = html;
    this.render();
  }

  private render(): void {
    this.root.innerHTML =
      `<div class="module-head"><span>Cohort</span></div>` +
      `<div class="config-form">` +
      `<label>age <input name="age_min" type="number" placeholder="min" size="4"/>` +
      ` – <input name="age_max" type="number" placeholder="max" size="4"/></label>` +
      `<label><input name="balance" type="checkbox"/> balance</label>` +
      `<label>seed <input name="seed" type="number" value="0"/></label>` +
      `<button class="select-button">select</button></div>` +
      `<div class="demographics">${this.demographicsHtml}</div>`;
  }
}
