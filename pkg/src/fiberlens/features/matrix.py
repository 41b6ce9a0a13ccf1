"""Per-region feature matrix plus its CSV round-trip.

Rows are scans, columns are features.  Each cell carries an OK flag; cells
flagged EMPTY_BUNDLE hold 0.0, are stored as empty CSV cells, and are
excluded from all downstream statistics (the ML pipeline median-imputes them
inside each training fold).
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from ..errors import BadValue, MissingColumn, UnknownFeature
from ..tract_io.metadata import _GROUP_ALIASES, GROUP_EXPORT


@dataclass
class FeatureMatrix:
    region: int
    region_name: str
    feature_names: tuple
    scan_ids: tuple
    subject_ids: tuple
    groups: tuple               # DISEASE / CONTROL per row
    values: np.ndarray          # (n_rows, n_features) float64; flagged cells 0.0
    ok: np.ndarray              # bool mask, False = EMPTY_BUNDLE

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.ok = np.asarray(self.ok, dtype=bool)
        n_rows, n_feat = self.values.shape
        if n_feat != len(self.feature_names):
            raise BadValue("value columns do not match feature_names")
        if not (len(self.scan_ids) == len(self.subject_ids)
                == len(self.groups) == n_rows):
            raise BadValue("row metadata length mismatch")
        if self.ok.shape != self.values.shape:
            raise BadValue("ok mask shape mismatch")
        if not np.isfinite(self.values[self.ok]).all():
            raise BadValue("non-finite value in an OK cell")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    def feature_index(self, name: str) -> int:
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise UnknownFeature(
                f"feature {name!r} not in region {self.region}"
            ) from None

    def column(self, name: str):
        """(values, ok) for one feature column."""
        idx = self.feature_index(name)
        return self.values[:, idx], self.ok[:, idx]

    def group_rows(self, group: str) -> np.ndarray:
        return np.array([g == group for g in self.groups], dtype=bool)

    def select_rows(self, mask) -> "FeatureMatrix":
        mask = np.asarray(mask)
        idx = np.flatnonzero(mask) if mask.dtype == bool else mask
        return FeatureMatrix(
            region=self.region,
            region_name=self.region_name,
            feature_names=self.feature_names,
            scan_ids=tuple(self.scan_ids[i] for i in idx),
            subject_ids=tuple(self.subject_ids[i] for i in idx),
            groups=tuple(self.groups[i] for i in idx),
            values=self.values[idx],
            ok=self.ok[idx],
        )

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["scan_id", "subject_id", "group", *self.feature_names])
        for i in range(self.n_rows):
            cells = [
                repr(float(self.values[i, j])) if self.ok[i, j] else ""
                for j in range(len(self.feature_names))
            ]
            writer.writerow(
                [self.scan_ids[i], self.subject_ids[i],
                 GROUP_EXPORT[self.groups[i]], *cells]
            )
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str, region: int, region_name: str = "") -> "FeatureMatrix":
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumn("empty feature CSV") from None
        if header[:3] != ["scan_id", "subject_id", "group"]:
            raise MissingColumn(
                "feature CSV must start with scan_id, subject_id, group columns"
            )
        names = tuple(header[3:])
        scan_ids, subject_ids, groups, rows, oks = [], [], [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3 + len(names):
                raise BadValue(f"row {lineno}: expected {3 + len(names)} cells")
            group = _GROUP_ALIASES.get(row[2].strip().upper())
            if group is None:
                raise BadValue(f"row {lineno}: unknown group {row[2]!r}")
            scan_ids.append(row[0])
            subject_ids.append(row[1])
            groups.append(group)
            vals = np.zeros(len(names))
            ok = np.zeros(len(names), dtype=bool)
            for j, cell in enumerate(row[3:]):
                cell = cell.strip()
                if cell == "":
                    continue
                try:
                    vals[j] = float(cell)
                except ValueError:
                    raise BadValue(f"row {lineno}: bad number {cell!r}") from None
                ok[j] = True
            rows.append(vals)
            oks.append(ok)
        values = np.array(rows) if rows else np.zeros((0, len(names)))
        okm = np.array(oks) if oks else np.zeros((0, len(names)), dtype=bool)
        return cls(
            region=region,
            region_name=region_name,
            feature_names=names,
            scan_ids=tuple(scan_ids),
            subject_ids=tuple(subject_ids),
            groups=tuple(groups),
            values=values,
            ok=okm,
        )
