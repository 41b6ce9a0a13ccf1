"""Pipeline configuration with validation and JSON round-trip."""

import json
import math
from dataclasses import asdict, dataclass

from ..errors import InvalidConfig

MAX_TREES = 1500


@dataclass(frozen=True)
class PipelineConfig:
    k: int = 5                      # CV folds
    c: int = 10                     # CV repetitions
    n_trees: int = 150              # extra-trees ensemble size
    top_m: int | str = "sqrt"       # features fed to the SVM: "sqrt" or fixed
    svm_cost: float = 1.0
    seed: int = 0
    n_candidates: int | str = "sqrt"  # split candidates per tree node
    svm_tol: float = 1e-6
    svm_max_passes: int = 4000
    subject_rows: str = "scans"     # "scans": one row per visit; "mean": collapse

    def validate(self) -> "PipelineConfig":
        if self.k < 2:
            raise InvalidConfig(f"k must be >= 2, got {self.k}")
        if self.c < 1:
            raise InvalidConfig(f"c must be >= 1, got {self.c}")
        if not 1 <= self.n_trees <= MAX_TREES:
            raise InvalidConfig(f"n_trees must be in [1, {MAX_TREES}], got {self.n_trees}")
        for name, value in (("top_m", self.top_m), ("n_candidates", self.n_candidates)):
            if isinstance(value, str):
                if value != "sqrt":
                    raise InvalidConfig(f"{name} must be 'sqrt' or an integer")
            elif int(value) < 1:
                raise InvalidConfig(f"{name} must be >= 1")
        if self.svm_cost <= 0:
            raise InvalidConfig(f"svm_cost must be positive, got {self.svm_cost}")
        if self.subject_rows not in ("scans", "mean"):
            raise InvalidConfig("subject_rows must be 'scans' or 'mean'")
        return self

    def resolve_count(self, rule, n_features: int) -> int:
        if rule == "sqrt":
            ceil_sqrt = math.isqrt(n_features - 1) + 1 if n_features > 1 else 1
            return min(n_features, ceil_sqrt)
        return max(1, min(n_features, int(rule)))

    def top_m_for(self, n_features: int) -> int:
        return self.resolve_count(self.top_m, n_features)

    def candidates_for(self, n_features: int) -> int:
        return self.resolve_count(self.n_candidates, n_features)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "PipelineConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise InvalidConfig(f"unknown config fields: {sorted(unknown)}")
        return cls(**doc).validate()
