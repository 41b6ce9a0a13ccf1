"""Versioned saliency report document with a canonical JSON form.

Serialization is deterministic: sorted keys, native Python floats (shortest
round-trip repr), no timestamps.  Identical (data, config, seed) inputs give
byte-identical JSON regardless of how many workers produced the regions.
"""

import json
from dataclasses import dataclass

from .config import PipelineConfig
from .pipeline import RegionResult, ScanPrediction, region_order

SCHEMA_VERSION = 1


@dataclass
class SaliencyReport:
    config: PipelineConfig
    cohort: dict                 # disease/control subject lists
    regions: dict                # region id -> RegionResult
    region_names: dict           # region id -> display name

    @property
    def order(self) -> list:
        return region_order(self.regions)

    def region(self, region_id: int) -> RegionResult:
        return self.regions[region_id]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "cohort": {
                "disease_subjects": list(self.cohort.get("disease_subjects", [])),
                "control_subjects": list(self.cohort.get("control_subjects", [])),
            },
            "region_order": [int(r) for r in self.order],
            "regions": {
                str(region): _region_to_dict(result, self.region_names.get(region, ""))
                for region, result in self.regions.items()
            },
        }

    def to_json(self, indent: int | None = 1) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_dict(cls, doc: dict) -> "SaliencyReport":
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported report schema {doc.get('schema_version')!r}"
            )
        regions = {}
        names = {}
        for key, rd in doc["regions"].items():
            region = int(key)
            regions[region] = _region_from_dict(region, rd)
            names[region] = rd.get("region_name", "")
        return cls(
            config=PipelineConfig.from_dict(doc["config"]),
            cohort=doc.get("cohort", {}),
            regions=regions,
            region_names=names,
        )

    @classmethod
    def from_json(cls, text: str) -> "SaliencyReport":
        return cls.from_dict(json.loads(text))


def _region_to_dict(result: RegionResult, name: str) -> dict:
    doc = {
        "region_name": name or result.region_name,
        "error": result.error,
    }
    if result.error is not None:
        return doc
    doc.update(
        {
            "performance": result.performance,
            "confusion": result.confusion,
            "group_sizes": {
                "disease": result.n_disease,
                "control": result.n_control,
            },
            "roc": {
                "grid_fpr": result.roc_grid,
                "mean_tpr": result.roc_mean_tpr,
                "std_tpr": result.roc_std_tpr,
                "trials": result.roc_trials,
                "auc_mean": result.auc_mean,
                "auc_std": result.auc_std,
            },
            "features": result.features,
            "scans": {
                scan_id: {
                    "subject_id": sp.subject_id,
                    "label": sp.label,
                    "p_mean": sp.p_mean,
                    "p_std": sp.p_std,
                    "n_tests": sp.n_tests,
                    "prediction": sp.prediction,
                    "correct": sp.correct,
                }
                for scan_id, sp in result.scans.items()
            },
        }
    )
    return doc


def _region_from_dict(region: int, doc: dict) -> RegionResult:
    result = RegionResult(
        region=region,
        region_name=doc.get("region_name", ""),
        error=doc.get("error"),
    )
    if result.error is not None:
        return result
    result.performance = doc["performance"]
    result.confusion = doc["confusion"]
    roc = doc["roc"]
    result.roc_grid = roc["grid_fpr"]
    result.roc_mean_tpr = roc["mean_tpr"]
    result.roc_std_tpr = roc["std_tpr"]
    result.roc_trials = roc["trials"]
    result.auc_mean = roc["auc_mean"]
    result.auc_std = roc["auc_std"]
    result.features = doc["features"]
    result.n_disease = doc["group_sizes"]["disease"]
    result.n_control = doc["group_sizes"]["control"]
    result.scans = {
        scan_id: ScanPrediction(
            scan_id=scan_id,
            subject_id=sd["subject_id"],
            label=sd["label"],
            p_mean=sd["p_mean"],
            p_std=sd["p_std"],
            n_tests=sd["n_tests"],
            prediction=sd["prediction"],
            correct=sd["correct"],
        )
        for scan_id, sd in doc["scans"].items()
    }
    return result
