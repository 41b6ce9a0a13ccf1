"""Cohort metadata CSV parsing.

Required columns: subject_id, scan_id, visit_date (YYYY-MM-DD), age, sex
(M/F), group (PD/HC).  Optional columns bind file references: ``tracks`` and
``vol_<MEASURE>`` (paths relative to the CSV location).
"""

import csv
import io
from datetime import date

from ..errors import BadDate, BadValue, DuplicateScanId, MissingColumn
from .model import CONTROL, DISEASE, ScanRecord

REQUIRED = ("subject_id", "scan_id", "visit_date", "age", "sex", "group")

_GROUP_ALIASES = {
    "PD": DISEASE,
    "HC": CONTROL,
    DISEASE: DISEASE,
    CONTROL: CONTROL,
}

GROUP_EXPORT = {DISEASE: "PD", CONTROL: "HC"}


def load_metadata(stream) -> list[ScanRecord]:
    """Parse scan records from CSV bytes, text, or a file-like object."""
    if isinstance(stream, bytes):
        stream = io.StringIO(stream.decode("utf-8"))
    elif isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.DictReader(stream)
    header = reader.fieldnames or []
    missing = [c for c in REQUIRED if c not in header]
    if missing:
        raise MissingColumn(f"metadata CSV missing columns: {', '.join(missing)}")

    volume_columns = [c for c in header if c.startswith("vol_")]
    records: list[ScanRecord] = []
    seen: set[str] = set()
    for lineno, row in enumerate(reader, start=2):
        scan_id = (row["scan_id"] or "").strip()
        subject_id = (row["subject_id"] or "").strip()
        if not scan_id or not subject_id:
            raise BadValue(f"row {lineno}: empty subject_id or scan_id")
        if scan_id in seen:
            raise DuplicateScanId(f"row {lineno}: scan_id {scan_id!r} repeated")
        seen.add(scan_id)

        raw_date = (row["visit_date"] or "").strip()
        try:
            visit = date.fromisoformat(raw_date)
        except ValueError:
            raise BadDate(f"row {lineno}: bad visit_date {raw_date!r}") from None

        try:
            age = float(row["age"])
        except (TypeError, ValueError):
            raise BadValue(f"row {lineno}: bad age {row['age']!r}") from None

        group_raw = (row["group"] or "").strip().upper()
        group = _GROUP_ALIASES.get(group_raw)
        if group is None:
            raise BadValue(f"row {lineno}: unknown group label {row['group']!r}")

        sex = (row["sex"] or "").strip().upper()
        volume_paths = {
            c[len("vol_"):]: row[c].strip()
            for c in volume_columns
            if (row[c] or "").strip()
        }
        tracks = (row.get("tracks") or "").strip() or None
        try:
            records.append(
                ScanRecord(
                    subject_id=subject_id,
                    scan_id=scan_id,
                    visit_date=visit,
                    age_at_scan=age,
                    sex=sex,
                    group_label=group,
                    tracks_path=tracks,
                    volume_paths=volume_paths,
                )
            )
        except BadValue as exc:
            raise BadValue(f"row {lineno}: {exc}") from None
    return records


def dump_metadata(records) -> str:
    """Inverse of load_metadata (demographic columns plus file references)."""
    measures = sorted({m for r in records for m in r.volume_paths})
    out = io.StringIO()
    header = list(REQUIRED) + ["tracks"] + [f"vol_{m}" for m in measures]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for r in records:
        writer.writerow(
            [
                r.subject_id,
                r.scan_id,
                r.visit_date.isoformat(),
                repr(r.age_at_scan),
                r.sex,
                GROUP_EXPORT[r.group_label],
                r.tracks_path or "",
            ]
            + [r.volume_paths.get(m, "") for m in measures]
        )
    return out.getvalue()
