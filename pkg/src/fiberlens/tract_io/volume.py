"""Volume descriptor parsing and spatial sampling.

A volume is a JSON descriptor plus a companion raw file: little-endian
values, x-fastest ordering (flat index = x + nx*(y + ny*z)).  Descriptor
fields: dims, voxel_size, affine (16 numbers row-major), dtype (f32|i16),
kind (scalar|label), measure_name, and for label volumes an atlas list.
"""

import json
from pathlib import Path

import numpy as np

from ..errors import BadValue, MalformedHeader, SizeMismatch
from .model import AtlasRegion, LabelVolume, ScalarVolume

_DTYPES = {"f32": np.dtype("<f4"), "i16": np.dtype("<i2")}


def parse_volume(header: bytes | str, raw: bytes):
    """Build a ScalarVolume or LabelVolume from descriptor text + raw bytes."""
    if isinstance(header, bytes):
        header = header.decode("utf-8")
    try:
        desc = json.loads(header)
    except json.JSONDecodeError as exc:
        raise MalformedHeader(f"descriptor is not valid JSON: {exc}") from None

    for key in ("dims", "voxel_size", "affine", "dtype", "kind"):
        if key not in desc:
            raise MalformedHeader(f"descriptor missing field {key!r}")

    dims = tuple(int(d) for d in desc["dims"])
    voxel_size = tuple(float(v) for v in desc["voxel_size"])
    affine_values = [float(v) for v in desc["affine"]]
    if len(affine_values) != 16:
        raise BadValue(f"affine needs 16 numbers, got {len(affine_values)}")
    affine = np.array(affine_values, dtype=np.float64).reshape(4, 4)

    dtype_name = desc["dtype"]
    if dtype_name not in _DTYPES:
        raise BadValue(f"dtype must be one of {sorted(_DTYPES)}, got {dtype_name!r}")
    dtype = _DTYPES[dtype_name]

    if len(raw) % dtype.itemsize != 0:
        raise SizeMismatch("raw stream length is not a multiple of element size")
    flat = np.frombuffer(raw, dtype=dtype)
    expected = dims[0] * dims[1] * dims[2] if len(dims) == 3 else -1
    if flat.size != expected:
        raise SizeMismatch(
            f"raw stream holds {flat.size} elements, dims require {expected}"
        )
    # x-fastest: Fortran-order reshape makes data[x, y, z] indexable
    data = flat.reshape(dims, order="F")

    kind = desc["kind"]
    if kind == "scalar":
        return ScalarVolume(
            dims=dims,
            voxel_size=voxel_size,
            affine=affine,
            data=np.asarray(data, dtype=np.float64),
            measure_name=str(desc.get("measure_name", "")),
        )
    if kind == "label":
        if dtype_name != "i16":
            raise BadValue("label volumes must use dtype i16")
        atlas = tuple(
            AtlasRegion(
                label=int(entry["label"]),
                name=str(entry["name"]),
                hemisphere=entry.get("hemisphere"),
                pair=entry.get("pair"),
            )
            for entry in desc.get("atlas", [])
        )
        return LabelVolume(
            dims=dims,
            voxel_size=voxel_size,
            affine=affine,
            data=np.asarray(data, dtype=np.int32),
            atlas=atlas,
        )
    raise BadValue(f"kind must be scalar or label, got {kind!r}")


def load_volume(descriptor_path):
    """Load a volume from a descriptor file; the raw file sits next to it."""
    path = Path(descriptor_path)
    desc = json.loads(path.read_text())
    raw_name = desc.get("raw", path.stem + ".raw")
    raw = (path.parent / raw_name).read_bytes()
    return parse_volume(path.read_text(), raw)


def save_volume(volume, descriptor_path):
    """Write descriptor JSON + companion raw file for a volume."""
    path = Path(descriptor_path)
    raw_name = path.stem + ".raw"
    is_label = isinstance(volume, LabelVolume)
    desc = {
        "dims": list(volume.dims),
        "voxel_size": list(volume.voxel_size),
        "affine": [float(v) for v in volume.affine.reshape(-1)],
        "dtype": "i16" if is_label else "f32",
        "kind": "label" if is_label else "scalar",
        "raw": raw_name,
    }
    if is_label:
        desc["atlas"] = [
            {
                "label": r.label,
                "name": r.name,
                **({"hemisphere": r.hemisphere} if r.hemisphere else {}),
                **({"pair": r.pair} if r.pair else {}),
            }
            for r in volume.atlas
        ]
    else:
        desc["measure_name"] = volume.measure_name
    store_dtype = _DTYPES["i16" if is_label else "f32"]
    flat = np.asarray(volume.data, dtype=store_dtype).reshape(-1, order="F")
    path.write_text(json.dumps(desc, indent=1, sort_keys=True))
    (path.parent / raw_name).write_bytes(flat.tobytes())


def world_to_voxel(volume, points: np.ndarray) -> np.ndarray:
    """Map (n, 3) world-mm positions to continuous voxel coordinates."""
    inv = np.linalg.inv(volume.affine)
    pts = np.asarray(points, dtype=np.float64)
    return pts @ inv[:3, :3].T + inv[:3, 3]


def voxel_to_world(volume, voxels: np.ndarray) -> np.ndarray:
    vox = np.asarray(voxels, dtype=np.float64)
    return vox @ volume.affine[:3, :3].T + volume.affine[:3, 3]


def sample_trilinear(volume, points: np.ndarray):
    """Trilinear samples at world positions.

    Returns ``(values, inside)``: out-of-bounds vertices get the background
    value 0.0 and ``inside=False``.  At exact voxel centers the stored value
    is reproduced exactly.
    """
    vox = world_to_voxel(volume, points)
    dims = np.asarray(volume.dims)
    inside = ((vox >= 0.0) & (vox <= dims - 1)).all(axis=1)

    v = np.clip(vox, 0.0, dims - 1)
    i0 = np.floor(v).astype(np.int64)
    i0 = np.minimum(i0, dims - 2)  # keep i0+1 addressable; frac compensates
    i0 = np.maximum(i0, 0)
    frac = v - i0

    data = volume.data
    # degenerate single-voxel axes: collapse interpolation on that axis
    fx, fy, fz = frac[:, 0], frac[:, 1], frac[:, 2]
    x0, y0, z0 = i0[:, 0], i0[:, 1], i0[:, 2]
    x1 = np.minimum(x0 + 1, dims[0] - 1)
    y1 = np.minimum(y0 + 1, dims[1] - 1)
    z1 = np.minimum(z0 + 1, dims[2] - 1)

    c000 = data[x0, y0, z0]
    c100 = data[x1, y0, z0]
    c010 = data[x0, y1, z0]
    c110 = data[x1, y1, z0]
    c001 = data[x0, y0, z1]
    c101 = data[x1, y0, z1]
    c011 = data[x0, y1, z1]
    c111 = data[x1, y1, z1]

    c00 = c000 * (1 - fx) + c100 * fx
    c10 = c010 * (1 - fx) + c110 * fx
    c01 = c001 * (1 - fx) + c101 * fx
    c11 = c011 * (1 - fx) + c111 * fx
    c0 = c00 * (1 - fy) + c10 * fy
    c1 = c01 * (1 - fy) + c11 * fy
    values = c0 * (1 - fz) + c1 * fz

    values = np.where(inside, values, 0.0)
    return values, inside


def sample_along(streamline: np.ndarray, volume):
    """Per-vertex trilinear samples for one streamline."""
    return sample_trilinear(volume, np.asarray(streamline, dtype=np.float64))
