"""Pipeline job management: one writer per dataset, cached results.

Jobs run in a background thread and publish their report atomically on
completion; readers only ever see a missing report or a finished one.  The
result cache is keyed by hash(dataset fingerprint, cohort, config) and a hit
is confirmed by comparing the full key material, not the hash alone.
"""

import hashlib
import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..cohort import CohortSpec
from ..errors import FiberlensError
from ..ml.config import PipelineConfig
from ..ml.folds import make_fold_plan
from ..ml.pipeline import run_all_regions
from ..ml.report import SaliencyReport

PENDING = "PENDING"
RUNNING = "RUNNING"
DONE = "DONE"
FAILED = "FAILED"

_ORDER = {PENDING: 0, RUNNING: 1, DONE: 2, FAILED: 2}


class JobConflict(FiberlensError):
    """A pipeline is already running for this dataset."""


@dataclass
class JobRecord:
    job_id: str
    dataset_id: str
    state: str = PENDING
    regions_done: int = 0
    regions_total: int = 0
    started_at: float | None = None
    finished_at: float | None = None
    error: str | None = None
    cache_key: str = ""
    cached: bool = False

    def advance(self, state: str):
        if _ORDER[state] < _ORDER[self.state]:
            raise ValueError(f"job state cannot move {self.state} -> {state}")
        self.state = state

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "dataset_id": self.dataset_id,
            "state": self.state,
            "progress": {
                "regions_done": self.regions_done,
                "regions_total": self.regions_total,
            },
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "error": self.error,
            "cached": self.cached,
        }


def cache_key_material(fingerprint: str, spec: CohortSpec,
                       config: PipelineConfig) -> str:
    return json.dumps(
        {
            "dataset": fingerprint,
            "cohort": spec.to_dict(),
            "config": config.to_dict(),
        },
        sort_keys=True,
    )


class JobManager:
    def __init__(self, cache_dir=None, jobs: int = 1):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        if self.cache_dir:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.jobs = jobs
        self._lock = threading.Lock()
        self._records: dict = {}
        self._running: dict = {}            # dataset_id -> job_id
        self._published: dict = {}          # dataset_id -> SaliencyReport
        self._threads: list = []

    # ------------------------------------------------------------------ api

    def get(self, job_id: str) -> JobRecord | None:
        with self._lock:
            return self._records.get(job_id)

    def report_for(self, dataset_id: str) -> SaliencyReport | None:
        with self._lock:
            return self._published.get(dataset_id)

    def publish(self, dataset_id: str, report: SaliencyReport):
        with self._lock:
            self._published[dataset_id] = report

    def submit(self, dataset_id: str, dataset, spec: CohortSpec,
               config: PipelineConfig) -> JobRecord:
        """Queue a pipeline run; an identical cached request completes
        immediately, a concurrent run for the dataset raises JobConflict."""
        config.validate()
        # fail fast on infeasible plans (e.g. k larger than a class)
        plan = make_fold_plan(spec.disease_subjects, spec.control_subjects, config)
        material = cache_key_material(dataset.fingerprint(), spec, config)
        key = hashlib.sha256(material.encode()).hexdigest()
        record = JobRecord(
            job_id=uuid.uuid4().hex,
            dataset_id=dataset_id,
            cache_key=key,
            regions_total=len(dataset.region_labels),
        )

        cached = self._load_cached(key, material)
        if cached is not None:
            record.cached = True
            record.state = DONE
            record.started_at = record.finished_at = time.time()
            record.regions_done = record.regions_total
            with self._lock:
                self._records[record.job_id] = record
                self._published[dataset_id] = cached
            return record

        with self._lock:
            running = self._running.get(dataset_id)
            if running is not None and self._records[running].state in (PENDING, RUNNING):
                raise JobConflict(
                    f"job {running} is already running for dataset {dataset_id}"
                )
            self._records[record.job_id] = record
            self._running[dataset_id] = record.job_id

        thread = threading.Thread(
            target=self._run,
            args=(record, dataset, spec, plan, config, material),
            daemon=True,
        )
        self._threads.append(thread)
        thread.start()
        return record

    # ------------------------------------------------------------- internals

    def _cache_paths(self, key: str):
        return (
            self.cache_dir / f"{key}.report.json",
            self.cache_dir / f"{key}.key.json",
        )

    def _load_cached(self, key: str, material: str) -> SaliencyReport | None:
        if not self.cache_dir:
            return None
        report_path, key_path = self._cache_paths(key)
        if not (report_path.is_file() and key_path.is_file()):
            return None
        if key_path.read_text() != material:  # hash collision guard
            return None
        return SaliencyReport.from_json(report_path.read_text())

    def _store_cached(self, key: str, material: str, report: SaliencyReport):
        if not self.cache_dir:
            return
        report_path, key_path = self._cache_paths(key)
        report_path.write_text(report.to_json())
        key_path.write_text(material)

    def _run(self, record: JobRecord, dataset, spec, plan, config, material):
        with self._lock:
            record.advance(RUNNING)
            record.started_at = time.time()
        try:
            matrices = dataset.matrices()

            def progress(done, total):
                with self._lock:
                    record.regions_done = done
                    record.regions_total = total

            results = run_all_regions(
                matrices, plan, config, jobs=self.jobs, progress=progress
            )
            report = SaliencyReport(
                config=config,
                cohort={
                    "disease_subjects": list(spec.disease_subjects),
                    "control_subjects": list(spec.control_subjects),
                },
                regions=results,
                region_names={
                    label: dataset.region_name(label) for label in results
                },
            )
            self._store_cached(record.cache_key, material, report)
            with self._lock:
                self._published[record.dataset_id] = report
                record.advance(DONE)
                record.finished_at = time.time()
        except FiberlensError as exc:
            with self._lock:
                record.error = str(exc)
                record.advance(FAILED)
                record.finished_at = time.time()

    def wait_all(self, timeout: float | None = None):
        for t in self._threads:
            t.join(timeout)
