// Typed client for the /api/v1 service. All view data enters through here.

export interface RegionEntry {
  region: number;
  name: string;
  error: string | null;
  accuracy_mean: number | null;
  accuracy_std: number | null;
  performance: Record<string, { mean: number; std: number }> | null;
}

export interface FeatureEntry {
  name: string;
  importance_mean: number;
  importance_std: number;
  p_value: number;
}

export interface ScanEntry {
  scan_id: string;
  subject_id: string;
  label: string;           // DISEASE / CONTROL
  p_mean: number;
  p_std: number;
  prediction: string;
  correct: boolean;
  visit_date: string | null;
  age: number | null;
  sex: string | null;
}

export interface SubjectsPayload {
  region: number;
  scans: ScanEntry[];
}

export interface RocTrial {
  fpr: number[];
  tpr: number[];
  auc: number;
}

export interface RegionReport {
  region_name: string;
  error: string | null;
  performance?: Record<string, { mean: number; std: number }>;
  confusion?: { tp: number; fp: number; fn: number; tn: number };
  group_sizes?: { disease: number; control: number };
  roc?: {
    grid_fpr: number[];
    mean_tpr: number[];
    std_tpr: number[];
    trials: RocTrial[];
    auc_mean: number;
    auc_std: number;
  };
}

export interface Report {
  schema_version: number;
  config: Record<string, unknown>;
  region_order: number[];
  regions: Record<string, RegionReport>;
}

export interface OrderedMatrixPayload {
  region: number;
  feature_names: string[];
  order: number[];
  cells: number[][];
  mode: string;
  communities: Record<string, number>;
}

export interface TrendPoint {
  age: number;
  mean: number;
  std: number;
  n: number;
}

export interface TrendsPayload {
  region: number;
  feature: string;
  bin_years: number;
  series: Record<string, TrendPoint[]>;
}

export interface HistogramPayload {
  region: number;
  feature: string;
  bin_edges: number[];
  counts: Record<string, number[]>;
}

export interface ProjectionPoint {
  scan_id: string;
  subject_id: string;
  x: number;
  y: number;
  label: string;
  prediction: string | null;
  correct: boolean | null;
}

export interface ProjectionPayload {
  region: number;
  features: string[];
  points: ProjectionPoint[];
}

export interface PredFeaturePoint {
  scan_id: string;
  subject_id: string;
  value: number | null;
  p_disease: number;
  p_std: number;
  label: string;
  prediction: string;
  correct: boolean;
}

export interface PredFeaturePayload {
  region: number;
  feature: string;
  threshold: number;
  points: PredFeaturePoint[];
}

export interface TimelineVisit {
  scan_id: string;
  visit_date: string;
  value: number | null;
  p_disease: number | null;
}

export interface TimelinePayload {
  region: number;
  subject_id: string;
  feature: string;
  visits: TimelineVisit[];
  control_reference: { mean: number | null; std: number | null };
}

export interface JobStatus {
  job_id: string;
  state: "PENDING" | "RUNNING" | "DONE" | "FAILED";
  progress: { regions_done: number; regions_total: number };
  error: string | null;
  cached: boolean;
}

export interface CohortPayload {
  cohort_id: string;
  spec: {
    disease_subjects: string[];
    control_subjects: string[];
    age_range: (number | null)[];
    balanced: boolean;
    seed: number;
  };
  demographics: {
    bin_edges: number[];
    groups: Record<string, {
      age_counts: number[];
      sex_counts: Record<string, number>;
      total: number;
    }>;
  };
}

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

async function parseError(response: Response): Promise<never> {
  let code = "HTTP_ERROR";
  let message = response.statusText;
  try {
    const doc = await response.json();
    code = doc.code ?? code;
    message = doc.message ?? message;
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(private base: string = "/api/v1") {}

  private async getJson<T>(path: string, params?: Record<string, unknown>): Promise<T> {
    const url = new URL(this.base + path, window.location.origin);
    for (const [k, v] of Object.entries(params ?? {})) {
      if (v !== undefined && v !== null) url.searchParams.set(k, String(v));
    }
    const response = await fetch(url);
    if (!response.ok) await parseError(response);
    return response.json() as Promise<T>;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return response.json() as Promise<T>;
  }

  regions(sort = "mean"): Promise<RegionEntry[]> {
    return this.getJson("/regions", { sort });
  }

  regionFeatures(region: number, sort = "importance"): Promise<FeatureEntry[]> {
    return this.getJson(`/regions/${region}/features`, { sort });
  }

  subjects(region: number): Promise<SubjectsPayload> {
    return this.getJson("/subjects", { region });
  }

  report(): Promise<Report> {
    return this.getJson("/report");
  }

  covariance(region: number, mode: string, group?: string, top = 10):
      Promise<OrderedMatrixPayload> {
    return this.getJson("/analytics/covariance", { region, mode, group, top });
  }

  trends(region: number, feature: string, splitBySex: boolean):
      Promise<TrendsPayload> {
    return this.getJson("/analytics/trends",
                        { region, feature, split_by_sex: splitBySex });
  }

  histogram(region: number, feature: string): Promise<HistogramPayload> {
    return this.getJson("/analytics/histogram", { region, feature });
  }

  projection(region: number, top = 10, seed = 0): Promise<ProjectionPayload> {
    return this.getJson("/analytics/projection", { region, top, seed });
  }

  predFeature(region: number, feature: string): Promise<PredFeaturePayload> {
    return this.getJson("/analytics/pred-feature", { region, feature });
  }

  timeline(subject: string, region: number, feature: string):
      Promise<TimelinePayload> {
    return this.getJson("/analytics/timeline", { subject, region, feature });
  }

  cohort(body: Record<string, unknown>): Promise<CohortPayload> {
    return this.postJson("/cohorts", body);
  }

  startPipeline(config: Record<string, unknown>, cohortId?: string):
      Promise<JobStatus> {
    return this.postJson("/jobs/pipeline", { config, cohort_id: cohortId });
  }

  jobStatus(jobId: string): Promise<JobStatus> {
    return this.getJson(`/jobs/${jobId}`);
  }

  async fibers(scanId: string, opts: {
    region?: number; measure: string; mode: string; logScale: boolean;
  }): Promise<ArrayBuffer> {
    const url = new URL(`${this.base}/fibers/${scanId}`, window.location.origin);
    if (opts.region !== undefined) url.searchParams.set("region", String(opts.region));
    url.searchParams.set("measure", opts.measure);
    url.searchParams.set("mode", opts.mode);
    url.searchParams.set("log_scale", String(opts.logScale));
    const response = await fetch(url);
    if (!response.ok) await parseError(response);
    return response.arrayBuffer();
  }
}
