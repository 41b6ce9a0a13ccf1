"""Track-file parser tests against hand-built byte fixtures.

Fixtures are assembled with struct/numpy directly from the format definition,
independently of the package's writer.
"""

import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberlens.errors import (
    MalformedHeader,
    ParseError,
    TruncatedStream,
    UnsupportedDatatype,
)
from fiberlens.tract_io.tck import parse_tck, write_tck

NAN3 = struct.pack("<3f", float("nan"), float("nan"), float("nan"))
INF3 = struct.pack("<3f", float("inf"), float("inf"), float("inf"))


def build(tracks, datatype="Float32LE", declare_count=None, terminator=True,
          end_line=True, extra=""):
    """Hand-rolled track stream: header lines, END, then raw triplets."""
    payload = b""
    for t in tracks:
        for p in t:
            payload += struct.pack("<3f", *p)
        payload += NAN3
    if terminator:
        payload += INF3

    lines = ["mrtrix tracks"]
    if datatype is not None:
        lines.append(f"datatype: {datatype}")
    if declare_count is not None:
        lines.append(f"count: {declare_count}")
    if extra:
        lines.append(extra)
    # compute offset iteratively since its digits change the header length
    offset = 0
    for _ in range(3):
        hdr = "\n".join(
            lines + [f"file: . {offset}"] + (["END"] if end_line else []) + [""]
        )
        offset = len(hdr.encode())
    header = "\n".join(
        lines + [f"file: . {offset}"] + (["END"] if end_line else []) + [""]
    ).encode()
    return header + payload


class TestParse:
    def test_single_track_two_points(self):
        data = build([[(0, 0, 0), (1, 0, 0)]])
        tracks = parse_tck(data)
        assert len(tracks) == 1
        np.testing.assert_array_equal(
            tracks[0], np.array([[0, 0, 0], [1, 0, 0]], dtype=np.float32)
        )

    def test_zero_tracks(self):
        assert parse_tck(build([])) == []

    def test_three_tracks_lengths_in_order(self):
        tracks = [
            [(i, 0, 0) for i in range(n)] for n in (2, 3, 4)
        ]
        parsed = parse_tck(build(tracks))
        assert [t.shape[0] for t in parsed] == [2, 3, 4]

    def test_declared_count_validated(self):
        data = build([[(0, 0, 0), (1, 0, 0)]], declare_count=1)
        assert len(parse_tck(data)) == 1
        with pytest.raises(TruncatedStream):
            parse_tck(build([[(0, 0, 0), (1, 0, 0)]], declare_count=2))

    def test_track_without_trailing_delimiter_is_kept(self):
        # points directly before the terminator form a final complete track
        data = build([]) [:-12]  # strip terminator
        data += struct.pack("<3f", 0, 0, 0) + struct.pack("<3f", 1, 1, 1) + INF3
        assert len(parse_tck(data)) == 1


class TestErrors:
    def test_missing_end_line(self):
        with pytest.raises(MalformedHeader):
            parse_tck(build([[(0, 0, 0), (1, 0, 0)]], end_line=False))

    def test_missing_datatype(self):
        with pytest.raises(MalformedHeader):
            parse_tck(build([[(0, 0, 0), (1, 0, 0)]], datatype=None))

    def test_unsupported_datatype(self):
        with pytest.raises(UnsupportedDatatype):
            parse_tck(build([[(0, 0, 0), (1, 0, 0)]], datatype="Float64BE"))

    def test_bad_magic(self):
        data = build([[(0, 0, 0), (1, 0, 0)]]).replace(b"mrtrix tracks", b"other tracks")
        with pytest.raises(MalformedHeader):
            parse_tck(data)

    def test_truncated_missing_terminator(self):
        data = build([[(0, 0, 0), (1, 0, 0)]], terminator=False)
        with pytest.raises(TruncatedStream):
            parse_tck(data)

    def test_truncated_partial_triplet(self):
        data = build([[(0, 0, 0), (1, 0, 0)]]) + b"\x00\x00\x80"
        with pytest.raises(TruncatedStream):
            parse_tck(data)

    def test_mixed_nonfinite_triplet(self):
        data = build([])[:-12]
        data += struct.pack("<3f", float("nan"), 0.0, float("nan")) + INF3
        with pytest.raises(ParseError):
            parse_tck(data)

    def test_single_point_track_rejected(self):
        data = build([])[:-12]
        data += struct.pack("<3f", 1, 2, 3) + NAN3 + INF3
        with pytest.raises(ParseError):
            parse_tck(data)


class TestRoundTrip:
    def test_exact_float32_round_trip(self):
        rng = np.random.default_rng(0)
        tracks = [
            rng.normal(scale=40.0, size=(n, 3)).astype(np.float32)
            for n in (2, 5, 17)
        ]
        parsed = parse_tck(write_tck(tracks))
        assert len(parsed) == len(tracks)
        for a, b in zip(tracks, parsed):
            np.testing.assert_array_equal(a, b)

    def test_no_nonfinite_points_survive(self):
        parsed = parse_tck(build([[(0, 0, 0), (1, 0, 0)], [(2, 2, 2), (3, 3, 3)]]))
        for t in parsed:
            assert np.isfinite(t).all()

    @settings(max_examples=25, deadline=None)
    @given(
        st.lists(
            st.integers(min_value=2, max_value=12), min_size=0, max_size=6
        ),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_round_trip_property(self, lengths, seed):
        rng = np.random.default_rng(seed)
        tracks = [
            rng.uniform(-100, 100, size=(n, 3)).astype(np.float32)
            for n in lengths
        ]
        parsed = parse_tck(write_tck(tracks))
        assert [t.shape[0] for t in parsed] == lengths
        for a, b in zip(tracks, parsed):
            np.testing.assert_array_equal(a, b)
