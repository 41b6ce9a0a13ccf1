"""Binary fiber geometry payloads and per-vertex value computation.

Wire format (all little-endian)::

    magic   b"FLGE"
    u32     header length in bytes
    bytes   header JSON (utf-8)
    u32     n_streamlines
    u32[n]  vertex count per streamline
    f32[3V] xyz vertex positions (V = total vertices)
    f32[V]  per-vertex mapped values

The header carries scan/region/measure identity, the color mode, and the
cohort-global value range so clients keep one color scale across brains.
"""

import json
import struct

import numpy as np

from ..errors import MeasureUnavailable, UnknownRegion
from ..features.names import measure_feature
from ..tract_io.bundles import assign_bundles
from ..tract_io.model import CONTROL
from ..tract_io.tck import parse_tck
from ..tract_io.volume import load_volume, sample_trilinear

MAGIC = b"FLGE"


def encode_payload(streamlines, values, header: dict) -> bytes:
    counts = np.array([s.shape[0] for s in streamlines], dtype="<u4")
    points = (
        np.concatenate([np.asarray(s, dtype="<f4") for s in streamlines])
        if streamlines else np.zeros((0, 3), dtype="<f4")
    )
    flat_values = (
        np.concatenate([np.asarray(v, dtype="<f4") for v in values])
        if values else np.zeros(0, dtype="<f4")
    )
    header = dict(header)
    header["n_streamlines"] = int(len(streamlines))
    header["n_vertices"] = int(points.shape[0])
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    return b"".join(
        [
            MAGIC,
            struct.pack("<I", len(blob)),
            blob,
            struct.pack("<I", len(streamlines)),
            counts.tobytes(),
            points.tobytes(),
            flat_values.tobytes(),
        ]
    )


def decode_payload(data: bytes):
    """Inverse of encode_payload; returns (header, streamlines, values)."""
    if data[:4] != MAGIC:
        raise ValueError("bad geometry payload magic")
    offset = 4
    (header_len,) = struct.unpack_from("<I", data, offset)
    offset += 4
    header = json.loads(data[offset:offset + header_len].decode("utf-8"))
    offset += header_len
    (n,) = struct.unpack_from("<I", data, offset)
    offset += 4
    counts = np.frombuffer(data, dtype="<u4", count=n, offset=offset)
    offset += 4 * n
    total = int(counts.sum())
    points = np.frombuffer(data, dtype="<f4", count=3 * total, offset=offset)
    points = points.reshape(total, 3)
    offset += 12 * total
    values = np.frombuffer(data, dtype="<f4", count=total, offset=offset)
    streamlines, chunks, start = [], [], 0
    for c in counts:
        streamlines.append(points[start:start + c])
        chunks.append(values[start:start + c])
        start += int(c)
    return header, streamlines, chunks


def signed_log(values: np.ndarray) -> np.ndarray:
    return np.sign(values) * np.log1p(np.abs(values))


def control_reference(matrix, measure: str) -> float:
    """Healthy-group mean of the region's whole-ROI measure feature."""
    values, ok = matrix.column(measure_feature(measure) + "_all")
    mask = matrix.group_rows(CONTROL) & ok
    if not mask.any():
        raise MeasureUnavailable(
            f"no control values for measure {measure} in region {matrix.region}"
        )
    return float(values[mask].mean())


def pooled_control_reference(matrices: dict, measure: str) -> float:
    """Whole-brain reference: control means pooled across regions."""
    refs = []
    for matrix in matrices.values():
        values, ok = matrix.column(measure_feature(measure) + "_all")
        mask = matrix.group_rows(CONTROL) & ok
        if mask.any():
            refs.append(float(values[mask].mean()))
    if not refs:
        raise MeasureUnavailable(f"no control values for measure {measure}")
    return float(np.mean(refs))


def scan_fiber_values(dataset, scan_id: str, region: int | None,
                      measure: str, reference: float | None,
                      log_scale: bool):
    """Streamlines of one scan (optionally isolated to a region) and their
    per-vertex mapped values."""
    record = dataset.record(scan_id)
    if measure not in dataset.measures:
        raise MeasureUnavailable(f"measure {measure!r} not in dataset")
    if not record.tracks_path:
        raise MeasureUnavailable(f"scan {scan_id} has no geometry")
    streamlines = parse_tck((dataset.root / record.tracks_path).read_bytes())

    if region is not None:
        if region not in dataset.region_labels:
            raise UnknownRegion(f"region {region} not in dataset")
        label_volume = dataset.label_volume()
        assignments = assign_bundles(streamlines, label_volume)
        streamlines = [
            s for s, a in zip(streamlines, assignments) if a.touches(region)
        ]

    volume = load_volume(dataset.root / record.volume_paths[measure])
    values = []
    for s in streamlines:
        sampled, _ = sample_trilinear(volume, np.asarray(s, dtype=np.float64))
        if reference is not None:
            sampled = sampled - reference
        if log_scale:
            sampled = signed_log(sampled)
        values.append(sampled)
    return streamlines, values


def cohort_value_range(dataset, scan_ids, region, measure, reference,
                       log_scale) -> tuple:
    """Global (min, max) of mapped values over the given scans."""
    lo, hi = np.inf, -np.inf
    for scan_id in scan_ids:
        _, values = scan_fiber_values(
            dataset, scan_id, region, measure, reference, log_scale
        )
        for v in values:
            if v.size:
                lo = min(lo, float(v.min()))
                hi = max(hi, float(v.max()))
    if lo > hi:
        lo, hi = 0.0, 1.0
    return lo, hi
