"""Reader/writer for the streamline track format used by the pipeline.

Layout: an ASCII header (``mrtrix tracks`` magic, ``key: value`` lines,
closed by ``END``), then little-endian float32 (x, y, z) triplets starting at
the byte offset declared by ``file: . <offset>``.  An all-NaN triplet closes
a track, an all-Inf triplet closes the stream.  Only ``Float32LE`` data is
supported.
"""

import numpy as np

from ..errors import (
    MalformedHeader,
    ParseError,
    TruncatedStream,
    UnsupportedDatatype,
)

MAGIC = "mrtrix tracks"
SUPPORTED_DATATYPE = "Float32LE"


def parse_header(data: bytes) -> dict:
    """Header key/value pairs; values are strings, keys lowercased."""
    try:
        end = data.index(b"END")
    except ValueError:
        raise MalformedHeader("no END line in header") from None
    text = data[:end].decode("ascii", errors="replace")
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise MalformedHeader(f"missing magic line {MAGIC!r}")
    fields: dict = {}
    for line in lines[1:]:
        line = line.strip()
        if not line:
            continue
        if ":" not in line:
            raise MalformedHeader(f"header line without key: {line!r}")
        key, value = line.split(":", 1)
        fields[key.strip().lower()] = value.strip()
    return fields


def parse_tck(data: bytes) -> list[np.ndarray]:
    """Parse a track byte stream into a list of (n, 3) float32 arrays."""
    fields = parse_header(data)
    datatype = fields.get("datatype")
    if datatype is None:
        raise MalformedHeader("header declares no datatype")
    if datatype != SUPPORTED_DATATYPE:
        raise UnsupportedDatatype(f"datatype {datatype!r} not supported")
    file_field = fields.get("file")
    if file_field is None:
        raise MalformedHeader("header declares no file offset")
    parts = file_field.split()
    if len(parts) != 2 or parts[0] != ".":
        raise MalformedHeader(f"unsupported file field {file_field!r}")
    try:
        offset = int(parts[1])
    except ValueError:
        raise MalformedHeader(f"bad byte offset {parts[1]!r}") from None
    if offset < 0 or offset > len(data):
        raise MalformedHeader(f"byte offset {offset} outside stream")

    payload = data[offset:]
    if len(payload) % 12 != 0:
        raise TruncatedStream("payload ends inside a triplet")
    triplets = np.frombuffer(payload, dtype="<f4").reshape(-1, 3)

    nan_rows = np.isnan(triplets).all(axis=1)
    inf_rows = np.isinf(triplets).all(axis=1)
    finite_rows = np.isfinite(triplets).all(axis=1)
    if not (finite_rows | nan_rows | inf_rows).all():
        raise ParseError("triplet mixes finite and non-finite components")

    terminators = np.flatnonzero(inf_rows)
    if terminators.size == 0:
        raise TruncatedStream("stream ends without terminator triplet")
    last = int(terminators[0])

    streamlines: list[np.ndarray] = []
    track_start = 0
    for row in range(last + 1):
        if nan_rows[row] or row == last:
            if row > track_start:
                track = triplets[track_start:row]
                if track.shape[0] < 2:
                    raise ParseError(
                        f"track {len(streamlines)} has {track.shape[0]} point(s), "
                        "need at least 2"
                    )
                streamlines.append(np.array(track, dtype=np.float32))
            track_start = row + 1

    declared = fields.get("count")
    if declared is not None:
        try:
            expected = int(declared)
        except ValueError:
            raise MalformedHeader(f"bad count field {declared!r}") from None
        if expected != len(streamlines):
            raise TruncatedStream(
                f"header declares {expected} tracks, stream holds {len(streamlines)}"
            )
    return streamlines


def write_tck(streamlines, extra_fields: dict | None = None) -> bytes:
    """Serialize streamlines; parse_tck(write_tck(s)) round-trips exactly."""
    fields = {"datatype": SUPPORTED_DATATYPE, "count": str(len(streamlines))}
    if extra_fields:
        fields.update({str(k): str(v) for k, v in extra_fields.items()})

    def render(offset: int) -> bytes:
        lines = [MAGIC]
        lines += [f"{k}: {v}" for k, v in sorted(fields.items())]
        lines += [f"file: . {offset}", "END", ""]
        return "\n".join(lines).encode("ascii")

    # the offset value changes the header length; iterate to a fixed point
    offset = len(render(0))
    while len(render(offset)) != offset:
        offset = len(render(offset))
    header = render(offset)

    chunks = [header]
    delim = np.full((1, 3), np.nan, dtype="<f4")
    for s in streamlines:
        pts = np.ascontiguousarray(s, dtype="<f4")
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 2:
            raise ParseError("streamlines must be (n>=2, 3) arrays")
        if not np.isfinite(pts).all():
            raise ParseError("streamline contains non-finite coordinates")
        chunks.append(pts.tobytes())
        chunks.append(delim.tobytes())
    chunks.append(np.full((1, 3), np.inf, dtype="<f4").tobytes())
    return b"".join(chunks)
