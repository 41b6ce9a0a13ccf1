"""HTTP facade: datasets, cohorts, pipeline jobs, analytics, fiber geometry.

All routes live under /api/v1.  GETs are read-only projections of the latest
published report plus the feature matrices; the single writer per dataset is
the pipeline job.  Errors are JSON {code, message, detail}.
"""

import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..analytics.ordered_matrix import ordered_matrix
from ..analytics.tsne import project_2d
from ..analytics.views import (
    histogram,
    prediction_feature_points,
    subject_timeline,
    trend_series,
)
from ..cohort import CohortSpec, demographics, select_cohort
from ..dataset import load_dataset
from ..errors import (
    EmptyCohort,
    FiberlensError,
    InvalidConfig,
    MeasureUnavailable,
    MissingVolume,
    ParseError,
    TooFewRows,
    TooFewSubjects,
    UnknownFeature,
    UnknownRegion,
    UnknownScan,
    UnknownSubject,
)
from ..ml.config import PipelineConfig
from ..ml.pipeline import apply_fold_stats, fit_fold_stats
from .geometry import (
    cohort_value_range,
    control_reference,
    encode_payload,
    pooled_control_reference,
    scan_fiber_values,
)
from .jobs import JobConflict, JobManager

API = "/api/v1"

_STATUS = {
    JobConflict: 409,
    UnknownScan: 404,
    UnknownRegion: 404,
    UnknownSubject: 404,
    UnknownFeature: 404,
    MeasureUnavailable: 404,
    MissingVolume: 404,
    InvalidConfig: 422,
    TooFewSubjects: 422,
    TooFewRows: 422,
    EmptyCohort: 422,
    ParseError: 422,
}


class NoReport(FiberlensError):
    """No completed pipeline report is published for this dataset."""


_STATUS[NoReport] = 409


class DatasetIn(BaseModel):
    path: str
    dataset_id: str | None = None


class CohortIn(BaseModel):
    dataset_id: str | None = None
    age_min: float | None = None
    age_max: float | None = None
    balance: bool = False
    seed: int = 0


class PipelineIn(BaseModel):
    dataset_id: str | None = None
    cohort_id: str | None = None
    cohort: dict | None = None
    config: dict = {}


class Store:
    def __init__(self):
        self.datasets: dict = {}
        self.cohorts: dict = {}
        self.range_cache: dict = {}
        self.lock = threading.Lock()

    def add(self, path, dataset_id=None) -> str:
        dataset = load_dataset(path)
        key = dataset_id or dataset.name
        with self.lock:
            self.datasets[key] = dataset
        return key

    def resolve(self, dataset_id: str | None):
        with self.lock:
            if dataset_id is not None:
                if dataset_id not in self.datasets:
                    raise UnknownScan(f"dataset {dataset_id!r} not registered")
                return dataset_id, self.datasets[dataset_id]
            if len(self.datasets) == 1:
                return next(iter(self.datasets.items()))
        raise UnknownScan("dataset_id required (multiple or zero datasets registered)")


def create_app(data_dir=None, cache_dir=None, jobs: int = 1,
               ui_dir=None) -> FastAPI:
    app = FastAPI(title="fiberlens", version="1")
    store = Store()
    manager = JobManager(cache_dir=cache_dir, jobs=jobs)
    app.state.store = store
    app.state.jobs = manager
    if data_dir and (Path(data_dir) / "manifest.json").is_file():
        store.add(data_dir)
    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(FiberlensError)
    async def domain_error(_: Request, exc: FiberlensError):
        return JSONResponse(
            status_code=_STATUS.get(type(exc), 400),
            content={
                "code": type(exc).__name__,
                "message": str(exc),
                "detail": None,
            },
        )

    # -------------------------------------------------------------- helpers

    def report_for(dataset_id: str):
        report = manager.report_for(dataset_id)
        if report is None:
            raise NoReport(f"no completed pipeline for dataset {dataset_id!r}")
        return report

    def region_result(report, dataset, region: int | None):
        if region is None:
            for candidate in report.order:
                if report.regions[candidate].error is None:
                    region = candidate
                    break
            else:
                raise UnknownRegion("report holds no successful region")
        if region not in report.regions:
            raise UnknownRegion(f"region {region} not in report")
        result = report.regions[region]
        if result.error is not None:
            raise UnknownRegion(f"region {region} failed: {result.error}")
        return region, result

    def cohort_scan_matrix(dataset, report, region: int):
        """Region matrix restricted to the report's cohort subjects."""
        matrix = dataset.matrices()[region]
        members = set(report.cohort.get("disease_subjects", [])) | set(
            report.cohort.get("control_subjects", [])
        )
        keep = np.array([s in members for s in matrix.subject_ids], dtype=bool)
        return matrix.select_rows(keep)

    def top_features(result, count: int) -> list:
        ranked = sorted(
            result.features.items(),
            key=lambda kv: (-kv[1]["importance_mean"], kv[0]),
        )
        return [name for name, _ in ranked[:count]]

    # ------------------------------------------------------------- datasets

    @app.post(API + "/datasets")
    def register_dataset(body: DatasetIn):
        key = store.add(body.path, body.dataset_id)
        dataset = store.datasets[key]
        return {
            "dataset_id": key,
            "scans": len(dataset.records),
            "subjects": len({r.subject_id for r in dataset.records}),
            "regions": len(dataset.regions),
            "has_features": dataset.has_features(),
        }

    @app.get(API + "/datasets")
    def list_datasets():
        return [
            {
                "dataset_id": key,
                "scans": len(ds.records),
                "regions": len(ds.regions),
                "has_features": ds.has_features(),
            }
            for key, ds in sorted(store.datasets.items())
        ]

    # --------------------------------------------------------------- cohort

    @app.post(API + "/cohorts")
    def make_cohort(body: CohortIn):
        dataset_id, dataset = store.resolve(body.dataset_id)
        age_range = None
        if body.age_min is not None or body.age_max is not None:
            age_range = (
                body.age_min if body.age_min is not None else -np.inf,
                body.age_max if body.age_max is not None else np.inf,
            )
        spec = select_cohort(
            dataset.records, age_range=age_range,
            balance=body.balance, seed=body.seed,
        )
        cohort_id = f"{dataset_id}:{len(store.cohorts)}"
        with store.lock:
            store.cohorts[cohort_id] = spec
        return {
            "cohort_id": cohort_id,
            "spec": spec.to_dict(),
            "demographics": demographics(spec, dataset.records),
        }

    # ----------------------------------------------------------------- jobs

    @app.post(API + "/jobs/pipeline")
    def run_pipeline(body: PipelineIn):
        dataset_id, dataset = store.resolve(body.dataset_id)
        if body.cohort is not None:
            spec = CohortSpec.from_dict(body.cohort)
        elif body.cohort_id is not None:
            with store.lock:
                spec = store.cohorts.get(body.cohort_id)
            if spec is None:
                raise UnknownScan(f"cohort {body.cohort_id!r} not registered")
        else:
            spec = select_cohort(dataset.records)
        config = PipelineConfig.from_dict(body.config)
        record = manager.submit(dataset_id, dataset, spec, config)
        return record.to_dict()

    @app.get(API + "/jobs/{job_id}")
    def job_status(job_id: str):
        record = manager.get(job_id)
        if record is None:
            raise UnknownScan(f"job {job_id!r} not found")
        return record.to_dict()

    # -------------------------------------------------------------- queries

    @app.get(API + "/report")
    def full_report(dataset_id: str | None = None):
        dataset_id, _ = store.resolve(dataset_id)
        return report_for(dataset_id).to_dict()

    @app.get(API + "/regions")
    def regions(dataset_id: str | None = None,
                sort: str = Query("mean", pattern="^(mean|std|id)$"),
                order: str = Query("desc", pattern="^(asc|desc)$")):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        entries = []
        for region, result in report.regions.items():
            entries.append(
                {
                    "region": region,
                    "name": result.region_name or dataset.region_name(region),
                    "error": result.error,
                    "accuracy_mean": result.saliency if result.error is None else None,
                    "accuracy_std": result.saliency_std if result.error is None else None,
                    "performance": result.performance if result.error is None else None,
                }
            )
        keys = {
            "mean": lambda e: -1.0 if e["accuracy_mean"] is None else e["accuracy_mean"],
            "std": lambda e: np.inf if e["accuracy_std"] is None else e["accuracy_std"],
            "id": lambda e: e["region"],
        }
        entries.sort(key=lambda e: (keys[sort](e), e["region"]),
                     reverse=(order == "desc"))
        return entries

    @app.get(API + "/regions/{region}/features")
    def region_features(region: int, dataset_id: str | None = None,
                        sort: str = Query("importance",
                                          pattern="^(importance|std|p|name)$")):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        _, result = region_result(report, dataset, region)
        entries = [
            {"name": name, **stats} for name, stats in result.features.items()
        ]
        keys = {
            "importance": lambda e: (-e["importance_mean"], e["name"]),
            "std": lambda e: (e["importance_std"], e["name"]),
            "p": lambda e: (e["p_value"], e["name"]),
            "name": lambda e: e["name"],
        }
        entries.sort(key=keys[sort])
        return entries

    @app.get(API + "/subjects")
    def subjects(dataset_id: str | None = None, region: int | None = None):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        region, result = region_result(report, dataset, region)
        records = dataset.records_by_scan
        entries = []
        for scan_id, sp in result.scans.items():
            record = records.get(scan_id)
            entries.append(
                {
                    "scan_id": scan_id,
                    "subject_id": sp.subject_id,
                    "label": sp.label,
                    "p_mean": sp.p_mean,
                    "p_std": sp.p_std,
                    "prediction": sp.prediction,
                    "correct": sp.correct,
                    "visit_date": record.visit_date.isoformat() if record else None,
                    "age": record.age_at_scan if record else None,
                    "sex": record.sex if record else None,
                }
            )
        entries.sort(key=lambda e: (-e["p_mean"], e["scan_id"]))
        return {"region": region, "scans": entries}

    # ------------------------------------------------------------ analytics

    @app.get(API + "/analytics/covariance")
    def analytics_covariance(dataset_id: str | None = None,
                             region: int | None = None,
                             group: str | None = None,
                             mode: str = Query("covariance",
                                               pattern="^(covariance|correlation)$"),
                             top: int = 10):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        region, result = region_result(report, dataset, region)
        matrix = cohort_scan_matrix(dataset, report, region)
        om = ordered_matrix(
            matrix, group=group, mode=mode,
            top_features=top_features(result, top),
        )
        return {"region": region, **om.to_dict()}

    @app.get(API + "/analytics/trends")
    def analytics_trends(dataset_id: str | None = None,
                         region: int | None = None,
                         feature: str | None = None,
                         split_by_sex: bool = False):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        region, result = region_result(report, dataset, region)
        matrix = cohort_scan_matrix(dataset, report, region)
        feature = feature or top_features(result, 1)[0]
        return {
            "region": region,
            **trend_series(matrix, dataset.records_by_scan, feature,
                           split_by_sex=split_by_sex),
        }

    @app.get(API + "/analytics/histogram")
    def analytics_histogram(dataset_id: str | None = None,
                            region: int | None = None,
                            feature: str | None = None):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        region, result = region_result(report, dataset, region)
        matrix = cohort_scan_matrix(dataset, report, region)
        feature = feature or top_features(result, 1)[0]
        return {"region": region, **histogram(matrix, feature)}

    @app.get(API + "/analytics/projection")
    def analytics_projection(dataset_id: str | None = None,
                             region: int | None = None,
                             top: int = 10, seed: int = 0):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        region, result = region_result(report, dataset, region)
        matrix = cohort_scan_matrix(dataset, report, region)
        names = top_features(result, top)
        cols = [matrix.feature_index(n) for n in names]
        values = matrix.values[:, cols]
        ok = matrix.ok[:, cols]
        stats = fit_fold_stats(values, ok)
        embedded = project_2d(apply_fold_stats(values, ok, stats), seed=seed)
        points = []
        for i, scan_id in enumerate(matrix.scan_ids):
            sp = result.scans.get(scan_id)
            points.append(
                {
                    "scan_id": scan_id,
                    "subject_id": matrix.subject_ids[i],
                    "x": float(embedded[i, 0]),
                    "y": float(embedded[i, 1]),
                    "label": matrix.groups[i],
                    "prediction": sp.prediction if sp else None,
                    "correct": sp.correct if sp else None,
                }
            )
        return {"region": region, "features": names, "points": points}

    @app.get(API + "/analytics/pred-feature")
    def analytics_pred_feature(dataset_id: str | None = None,
                               region: int | None = None,
                               feature: str | None = None):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        region, result = region_result(report, dataset, region)
        matrix = cohort_scan_matrix(dataset, report, region)
        feature = feature or top_features(result, 1)[0]
        return {
            "region": region,
            "feature": feature,
            "threshold": 0.5,
            "points": prediction_feature_points(result, matrix, feature),
        }

    @app.get(API + "/analytics/timeline")
    def analytics_timeline(subject: str, dataset_id: str | None = None,
                           region: int | None = None,
                           feature: str | None = None):
        dataset_id, dataset = store.resolve(dataset_id)
        report = report_for(dataset_id)
        region, result = region_result(report, dataset, region)
        matrix = dataset.matrices()[region]
        feature = feature or top_features(result, 1)[0]
        return {
            "region": region,
            **subject_timeline(result, matrix, dataset.records_by_scan,
                               subject, feature),
        }

    # --------------------------------------------------------------- fibers

    @app.get(API + "/fibers/{scan_id}")
    def fibers(scan_id: str, dataset_id: str | None = None,
               region: int | None = None, measure: str = "FA",
               mode: str = Query("direct", pattern="^(direct|contrastive)$"),
               log_scale: bool = False):
        dataset_id, dataset = store.resolve(dataset_id)
        reference = None
        scan_ids = sorted(dataset.records_by_scan)
        if mode == "contrastive":
            report = report_for(dataset_id)
            members = set(report.cohort.get("disease_subjects", [])) | set(
                report.cohort.get("control_subjects", [])
            )
            scan_ids = sorted(
                r.scan_id for r in dataset.records if r.subject_id in members
            )
            if region is not None:
                matrix = cohort_scan_matrix(dataset, report, region)
                reference = control_reference(matrix, measure)
            else:
                matrices = {
                    label: cohort_scan_matrix(dataset, report, label)
                    for label in dataset.region_labels
                }
                reference = pooled_control_reference(matrices, measure)

        range_key = (dataset_id, region, measure, mode, log_scale)
        with store.lock:
            value_range = store.range_cache.get(range_key)
        if value_range is None:
            value_range = cohort_value_range(
                dataset, scan_ids, region, measure, reference, log_scale
            )
            with store.lock:
                store.range_cache[range_key] = value_range

        streamlines, values = scan_fiber_values(
            dataset, scan_id, region, measure, reference, log_scale
        )
        payload = encode_payload(
            streamlines, values,
            {
                "scan_id": scan_id,
                "region": region,
                "measure": measure,
                "mode": mode,
                "log_scale": log_scale,
                "reference": reference,
                "value_range": list(value_range),
            },
        )
        return Response(content=payload, media_type="application/octet-stream")

    return app
