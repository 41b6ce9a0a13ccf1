"""Volume descriptor parsing and trilinear sampling."""

import json

import numpy as np
import pytest

from fiberlens.errors import BadAffine, BadValue, SizeMismatch
from fiberlens.tract_io.model import LabelVolume, ScalarVolume
from fiberlens.tract_io.volume import (
    load_volume,
    parse_volume,
    sample_trilinear,
    save_volume,
    voxel_to_world,
    world_to_voxel,
)

IDENTITY = [
    1.0, 0.0, 0.0, 0.0,
    0.0, 1.0, 0.0, 0.0,
    0.0, 0.0, 1.0, 0.0,
    0.0, 0.0, 0.0, 1.0,
]


def descriptor(**overrides):
    doc = {
        "dims": [2, 2, 2],
        "voxel_size": [1.0, 1.0, 1.0],
        "affine": IDENTITY,
        "dtype": "f32",
        "kind": "scalar",
        "measure_name": "FA",
    }
    doc.update(overrides)
    return json.dumps(doc)


def raw_f32(values):
    return np.asarray(values, dtype="<f4").tobytes()


class TestParse:
    def test_x_fastest_layout(self):
        vol = parse_volume(descriptor(), raw_f32(range(8)))
        # flat index x + 2*(y + 2*z): voxel (1,1,1) holds the last element
        assert vol.data[1, 1, 1] == 7.0
        assert vol.data[1, 0, 0] == 1.0
        assert vol.data[0, 1, 0] == 2.0
        assert vol.data[0, 0, 1] == 4.0

    def test_short_raw_stream(self):
        with pytest.raises(SizeMismatch):
            parse_volume(descriptor(), raw_f32(range(7)))

    def test_identity_affine_voxel_to_world(self):
        vol = parse_volume(descriptor(), raw_f32(range(8)))
        world = voxel_to_world(vol, np.array([[1.0, 0.0, 0.0]]))
        np.testing.assert_allclose(world, [[1.0, 0.0, 0.0]])

    def test_singular_affine(self):
        bad = list(IDENTITY)
        bad[0] = 0.0  # first row zero scale -> singular 3x3 block
        with pytest.raises(BadAffine):
            parse_volume(descriptor(affine=bad), raw_f32(range(8)))

    def test_label_volume_requires_i16(self):
        with pytest.raises(BadValue):
            parse_volume(descriptor(kind="label"), raw_f32(range(8)))

    def test_label_volume_atlas_must_cover_labels(self):
        raw = np.array([0, 0, 0, 0, 1, 1, 2, 2], dtype="<i2").tobytes()
        with pytest.raises(BadValue):
            parse_volume(
                descriptor(kind="label", dtype="i16",
                           atlas=[{"label": 1, "name": "a"}]),
                raw,
            )
        vol = parse_volume(
            descriptor(kind="label", dtype="i16",
                       atlas=[{"label": 1, "name": "a"},
                              {"label": 2, "name": "b"}]),
            raw,
        )
        assert isinstance(vol, LabelVolume)
        assert vol.region(2).name == "b"

    def test_save_load_round_trip(self, tmp_path):
        vol = parse_volume(descriptor(), raw_f32(range(8)))
        save_volume(vol, tmp_path / "v.json")
        back = load_volume(tmp_path / "v.json")
        assert isinstance(back, ScalarVolume)
        np.testing.assert_array_equal(back.data, vol.data)
        np.testing.assert_array_equal(back.affine, vol.affine)
        assert back.measure_name == "FA"


class TestSampling:
    def make_volume(self, data, affine=None):
        data = np.asarray(data, dtype=np.float64)
        return ScalarVolume(
            dims=data.shape,
            voxel_size=(1.0, 1.0, 1.0),
            affine=np.array(affine
                            if affine is not None
                            else np.eye(4)),
            data=data,
            measure_name="T",
        )

    def test_constant_field(self):
        vol = self.make_volume(np.full((4, 4, 4), 3.25))
        pts = np.array([[0.5, 1.7, 2.2], [3.0, 3.0, 3.0], [1.1, 0.0, 2.9]])
        values, inside = sample_trilinear(vol, pts)
        np.testing.assert_allclose(values, 3.25)
        assert inside.all()

    def test_linear_field_exact(self):
        x = np.arange(4, dtype=np.float64)
        field = np.broadcast_to(x[:, None, None], (4, 4, 4)).copy()
        vol = self.make_volume(field)
        values, inside = sample_trilinear(vol, np.array([[1.5, 1.0, 1.0]]))
        assert inside[0]
        assert values[0] == pytest.approx(1.5, abs=0)

    def test_voxel_centers_exact(self):
        rng = np.random.default_rng(3)
        data = rng.normal(size=(3, 4, 5))
        vol = self.make_volume(data)
        grid = np.array(
            [[x, y, z] for x in range(3) for y in range(4) for z in range(5)],
            dtype=np.float64,
        )
        values, inside = sample_trilinear(vol, grid)
        assert inside.all()
        np.testing.assert_array_equal(
            values, data[grid[:, 0].astype(int),
                         grid[:, 1].astype(int),
                         grid[:, 2].astype(int)]
        )

    def test_out_of_bounds_flagged_zero(self):
        vol = self.make_volume(np.full((2, 2, 2), 9.0))
        values, inside = sample_trilinear(vol, np.array([[5.0, 0.0, 0.0]]))
        assert values[0] == 0.0
        assert not inside[0]

    def test_world_voxel_round_trip_with_affine(self):
        affine = np.array(
            [
                [2.0, 0.0, 0.0, -10.0],
                [0.0, 2.0, 0.0, 4.0],
                [0.0, 0.0, 1.5, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]
        )
        vol = self.make_volume(np.zeros((4, 4, 4)), affine=affine)
        vox = np.array([[1.0, 2.0, 3.0]])
        back = world_to_voxel(vol, voxel_to_world(vol, vox))
        np.testing.assert_allclose(back, vox, atol=1e-12)
