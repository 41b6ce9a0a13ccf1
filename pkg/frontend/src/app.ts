// Composition root: wires the store, the API client, the exploration
// modules, the info-vis views, and the dual fiber views together. Server
// fetches carry an AbortController that cancels when the selection moves on.

import { ApiClient, FeatureEntry, RegionEntry, SubjectsPayload } from "./api.js";
import { CameraPair } from "./camera.js";
import { groupHistogram, trendChart, demographicsChart } from "./charts/distributions.js";
import { matrixHeatmap, parallelCoordinates, ParallelCoordsRow } from "./charts/matrixview.js";
import { performanceSummary, rocChart } from "./charts/roc.js";
import { predFeatureScatter, projectionScatter } from "./charts/scatter.js";
import { timelineChart } from "./charts/timeline.js";
import { fiberColorScale } from "./color.js";
import { FiberView, colorLegend } from "./fiberview.js";
import { decodeFiberPayload } from "./payload.js";
import { CohortPanel, FeatureModule, PipelinePanel, RegionModule, SubjectModule } from "./panels.js";
import { Action, SelectionState, Slot, Store } from "./state.js";
import { effectiveFeature, effectiveRegion, firstScanBySubject } from "./viewmodels.js";

function element(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

export class App {
  private api = new ApiClient();
  private store = new Store();
  private cameras = new CameraPair();

  private regionModule!: RegionModule;
  private featureModule!: FeatureModule;
  private subjectModule!: SubjectModule;
  private pipelinePanel!: PipelinePanel;
  private cohortPanel!: CohortPanel;
  private fiberViews: Partial<Record<Slot, FiberView>> = {};

  private regions: RegionEntry[] = [];
  private features: FeatureEntry[] = [];
  private subjects: SubjectsPayload = { region: -1, scans: [] };
  private cohortId: string | undefined;
  private analyticsAbort = new AbortController();

  start(): void {
    this.regionModule = new RegionModule(element("region-module"), this.store);
    this.featureModule = new FeatureModule(element("feature-module"), this.store);
    this.subjectModule = new SubjectModule(element("subject-module"), this.store);
    this.pipelinePanel = new PipelinePanel(element("pipeline-panel"), {
      start: config => void this.runPipeline(config),
    });
    this.cohortPanel = new CohortPanel(element("cohort-panel"), {
      select: body => void this.selectCohort(body),
    });
    for (const slot of ["left", "right"] as Slot[]) {
      const canvas = element(`fiber-${slot}`) as HTMLCanvasElement;
      const view = new FiberView(canvas, this.cameras.camera(slot));
      view.onCameraChange = () => {
        this.fiberViews.left?.render();
        this.fiberViews.right?.render();
      };
      this.fiberViews[slot] = view;
    }
    this.bindControls();

    this.store.subscribe((state, action) => void this.onState(state, action));
    void this.refreshReportViews();
  }

  private bindControls(): void {
    const link = element("camera-link") as HTMLInputElement;
    link.addEventListener("change", () => {
      this.store.dispatch({ kind: "set-camera-link", linked: link.checked });
    });
    const mode = element("color-mode") as HTMLSelectElement;
    mode.addEventListener("change", () => {
      this.store.dispatch({
        kind: "set-color-mode",
        mode: mode.value as "direct" | "contrastive",
      });
    });
    const log = element("log-scale") as HTMLInputElement;
    log.addEventListener("change", () => {
      this.store.dispatch({ kind: "set-log-scale", enabled: log.checked });
    });
    const radius = element("tube-radius") as HTMLInputElement;
    radius.addEventListener("input", () => {
      this.store.dispatch({ kind: "set-tube-radius", radius: Number(radius.value) });
    });
    const matrixMode = element("matrix-mode") as HTMLSelectElement;
    matrixMode.addEventListener("change", () => {
      this.store.dispatch({
        kind: "set-matrix-mode",
        mode: matrixMode.value as "covariance" | "correlation",
      });
    });
    const split = element("trend-split") as HTMLInputElement;
    split.addEventListener("change", () => {
      this.store.dispatch({ kind: "set-trend-split", bySex: split.checked });
    });
  }

  // ------------------------------------------------------------------ flows

  private async selectCohort(body: Record<string, unknown>): Promise<void> {
    try {
      const cohort = await this.api.cohort(body);
      this.cohortId = cohort.cohort_id;
      this.cohortPanel.setDemographics(demographicsChart(cohort.demographics));
    } catch (error) {
      this.cohortPanel.setDemographics(`<div class="error">${String(error)}</div>`);
    }
  }

  private async runPipeline(config: Record<string, unknown>): Promise<void> {
    try {
      let job = await this.api.startPipeline(config, this.cohortId);
      this.pipelinePanel.setProgress(
        job.progress.regions_done, job.progress.regions_total, job.state);
      while (job.state === "PENDING" || job.state === "RUNNING") {
        await new Promise(resolve => setTimeout(resolve, 400));
        job = await this.api.jobStatus(job.job_id);
        this.pipelinePanel.setProgress(
          job.progress.regions_done, job.progress.regions_total, job.state);
      }
      if (job.state === "DONE") await this.refreshReportViews();
      else this.pipelinePanel.setResults(
        `<div class="error">${job.error ?? "failed"}</div>`);
    } catch (error) {
      this.pipelinePanel.setResults(`<div class="error">${String(error)}</div>`);
    }
  }

  private async refreshReportViews(): Promise<void> {
    try {
      this.regions = await this.api.regions();
    } catch {
      return; // no report yet: panels stay empty until a run finishes
    }
    this.regionModule.setData(this.regions);
    const region = effectiveRegion(this.store.current, this.regions);
    if (region !== null) {
      await this.loadRegion(region);
      const report = await this.api.report();
      const entry = report.regions[String(region)];
      if (entry && !entry.error && entry.roc) {
        this.pipelinePanel.setResults(
          rocChart(entry.roc) + performanceSummary(entry));
      }
    }
  }

  private async loadRegion(region: number): Promise<void> {
    [this.features, this.subjects] = await Promise.all([
      this.api.regionFeatures(region),
      this.api.subjects(region),
    ]);
    this.featureModule.setData(this.features);
    this.subjectModule.setData(this.subjects.scans);
    await this.refreshAnalytics();
    await this.refreshFiberViews();
  }

  private async onState(state: SelectionState, action: Action): Promise<void> {
    switch (action.kind) {
      case "select-region":
        await this.loadRegion(action.region);
        break;
      case "select-feature":
      case "set-matrix-mode":
      case "set-trend-split":
        this.featureModule.render(state);
        await this.refreshAnalytics();
        break;
      case "compare-subject":
      case "select-visit":
      case "clear-comparison":
        this.subjectModule.render(state);
        await this.refreshAnalytics();
        await this.refreshFiberViews();
        break;
      case "hover":
        this.subjectModule.render(state);
        await this.refreshScatterViews();
        break;
      case "set-camera-link":
        this.cameras.setLinked(action.linked);
        this.fiberViews.left?.render();
        this.fiberViews.right?.render();
        break;
      case "set-color-mode":
      case "set-log-scale":
        await this.refreshFiberViews();
        break;
      case "set-tube-radius":
        this.fiberViews.left?.setRadius(state.tubeRadius);
        this.fiberViews.right?.setRadius(state.tubeRadius);
        break;
    }
  }

  // ------------------------------------------------------------- info views

  private scanMeta = (scanId: string) => {
    const first = firstScanBySubject(this.subjects.scans);
    const scan = this.subjects.scans.find(s => s.scan_id === scanId);
    return {
      subjectId: scan?.subject_id ?? "",
      firstScan: scan ? first.get(scan.subject_id) ?? null : null,
    };
  };

  private async refreshAnalytics(): Promise<void> {
    this.analyticsAbort.abort();
    this.analyticsAbort = new AbortController();
    const signal = this.analyticsAbort.signal;

    const state = this.store.current;
    const region = effectiveRegion(state, this.regions);
    const feature = effectiveFeature(state, this.features);
    if (region === null || feature === null) return;

    try {
      const [matrix, trends, histogram, projection, predFeature] =
        await Promise.all([
          this.api.covariance(region, state.matrixMode),
          this.api.trends(region, feature, state.splitTrendsBySex),
          this.api.histogram(region, feature),
          this.api.projection(region),
          this.api.predFeature(region, feature),
        ]);
      if (signal.aborted) return; // selection moved on meanwhile

      element("matrix-view").innerHTML = matrixHeatmap(matrix);
      element("trend-view").innerHTML = trendChart(trends);
      element("histogram-view").innerHTML = groupHistogram(histogram);
      element("projection-view").innerHTML =
        projectionScatter(projection.points, state, this.scanMeta);
      element("pred-feature-view").innerHTML =
        predFeatureScatter(predFeature.points, state, this.scanMeta);

      // parallel coordinates share the matrix view's axis permutation;
      // per-axis values come from one scatter payload per feature
      const axes = matrix.feature_names;
      const columns = await Promise.all(
        axes.map(name => this.api.predFeature(region, name)),
      );
      if (signal.aborted) return;
      const valueOf = columns.map(
        payload => new Map(payload.points.map(p => [p.scan_id, p.value])),
      );
      const rows: ParallelCoordsRow[] = this.subjects.scans.map(s => ({
        scanId: s.scan_id,
        label: s.label,
        values: axes.map((_, j) => valueOf[j].get(s.scan_id) ?? null),
      }));
      element("parcoords-view").innerHTML = parallelCoordinates(
        axes,
        rows,
        new Set(state.compared.map(c => c.scanId)),
      );
      this.bindScatterEvents();
      await this.refreshTimelines();
    } catch (error) {
      if (!signal.aborted) console.warn("analytics refresh failed", error);
    }
  }

  private async refreshScatterViews(): Promise<void> {
    // hover only re-renders the glyph layers (cheap client-side redraw)
    const state = this.store.current;
    const region = effectiveRegion(state, this.regions);
    const feature = effectiveFeature(state, this.features);
    if (region === null || feature === null) return;
    try {
      const [projection, predFeature] = await Promise.all([
        this.api.projection(region),
        this.api.predFeature(region, feature),
      ]);
      element("projection-view").innerHTML =
        projectionScatter(projection.points, state, this.scanMeta);
      element("pred-feature-view").innerHTML =
        predFeatureScatter(predFeature.points, state, this.scanMeta);
      this.bindScatterEvents();
    } catch {
      /* transient */
    }
  }

  private bindScatterEvents(): void {
    for (const id of ["projection-view", "pred-feature-view"]) {
      const node = element(id);
      node.onclick = e => {
        const glyph = (e.target as HTMLElement).closest("[data-scan]") as HTMLElement | null;
        if (!glyph) return;
        const scanId = glyph.dataset.scan!;
        const meta = this.scanMeta(scanId);
        if (meta.subjectId) {
          this.store.dispatch({
            kind: "compare-subject", subjectId: meta.subjectId, scanId,
          });
        }
      };
    }
  }

  private async refreshTimelines(): Promise<void> {
    const state = this.store.current;
    const region = effectiveRegion(state, this.regions);
    const feature = effectiveFeature(state, this.features);
    for (const slot of ["left", "right"] as Slot[]) {
      const node = element(`timeline-${slot}`);
      const compared = state.compared.find(c => c.slot === slot);
      if (!compared || region === null || feature === null) {
        node.innerHTML = "";
        continue;
      }
      try {
        const payload = await this.api.timeline(compared.subjectId, region, feature);
        node.innerHTML = timelineChart(payload, compared.scanId);
        node.onclick = e => {
          const visit = (e.target as HTMLElement).closest(".visit") as HTMLElement | null;
          if (visit) {
            // clicking a visit switches this fiber view to that scan
            this.store.dispatch({
              kind: "select-visit",
              subjectId: compared.subjectId,
              scanId: visit.dataset.scan!,
            });
          }
        };
      } catch {
        node.innerHTML = "";
      }
    }
  }

  private async refreshFiberViews(): Promise<void> {
    const state = this.store.current;
    const region = effectiveRegion(state, this.regions);
    for (const slot of ["left", "right"] as Slot[]) {
      const compared = state.compared.find(c => c.slot === slot);
      const view = this.fiberViews[slot];
      if (!view || !compared) continue;
      try {
        const buffer = await this.api.fibers(compared.scanId, {
          region: region ?? undefined,
          measure: this.measureOf(effectiveFeature(state, this.features)),
          mode: state.colorMode,
          logScale: state.logScale,
        });
        const geometry = decodeFiberPayload(buffer);
        const scale = fiberColorScale(
          state.colorMode,
          geometry.header.value_range as [number, number],
        );
        view.setGeometry(geometry, scale);
        element("fiber-legend").innerHTML = colorLegend(scale);
      } catch (error) {
        console.warn(`fiber view ${slot} failed`, error);
      }
    }
    await this.refreshTimelines();
  }

  /** Feature name -> underlying volume measure (MFA_all -> FA). */
  private measureOf(feature: string | null): string {
    if (!feature) return "FA";
    const stem = feature.replace(/^dLR_/, "").split("_")[0];
    return stem.startsWith("M") && stem.length > 1 ? stem.slice(1) : "FA";
  }
}
