"""Feature extraction: tract stats, tensor means, asymmetry, matrices."""

import numpy as np
import pytest

from fiberlens.errors import MissingVolume
from fiberlens.features.extract import (
    asymmetry,
    build_feature_matrices,
    load_scan_data,
    polyline_length,
    tensor_mean,
    tract_features,
)
from fiberlens.features.matrix import FeatureMatrix
from fiberlens.features.names import base_feature_names, feature_names
from fiberlens.tract_io.model import DISEASE


class TestTractFeatures:
    def test_three_four_five_triangle(self):
        fiber = np.array([[0, 0, 0], [3, 4, 0]], dtype=np.float64)
        assert polyline_length(fiber) == 5.0
        out = tract_features(np.array([polyline_length(fiber)]))
        assert out["FN"] == (1.0, True)
        assert out["AFL"] == (5.0, True)

    def test_mean_of_lengths(self):
        out = tract_features(np.array([5.0, 7.0]))
        assert out["AFL"] == (6.0, True)
        assert out["FN"] == (2.0, True)

    def test_empty_bundle_flags_afl(self):
        out = tract_features(np.zeros(0))
        assert out["FN"] == (0.0, True)
        assert out["AFL"][1] is False

    def test_length_scales_fn_invariant(self):
        rng = np.random.default_rng(0)
        fibers = [rng.normal(size=(6, 3)) for _ in range(4)]
        lengths = np.array([polyline_length(f) for f in fibers])
        scaled = np.array([polyline_length(2.5 * f) for f in fibers])
        base = tract_features(lengths)
        big = tract_features(scaled)
        assert big["FN"] == base["FN"]
        assert big["AFL"][0] == pytest.approx(2.5 * base["AFL"][0])

    def test_invariant_under_fiber_order_and_reversal(self):
        rng = np.random.default_rng(1)
        fibers = [rng.normal(size=(5, 3)) for _ in range(3)]
        lengths = np.array([polyline_length(f) for f in fibers])
        reordered = np.array([polyline_length(f[::-1]) for f in fibers[::-1]])
        a = tract_features(lengths)
        b = tract_features(reordered)
        assert a["FN"] == b["FN"]
        assert a["AFL"][0] == pytest.approx(b["AFL"][0], abs=1e-12)


class TestTensorMean:
    def test_constant_field(self):
        samples = [np.full(5, 0.4), np.full(3, 0.4)]
        inside = [np.ones(5, bool), np.ones(3, bool)]
        assert tensor_mean(samples, inside) == (0.4, True)

    def test_vertex_weighted_mean(self):
        samples = [np.array([0.0, 1.0]), np.array([1.0, 2.0])]
        inside = [np.ones(2, bool), np.ones(2, bool)]
        value, ok = tensor_mean(samples, inside)
        assert ok and value == 1.0

    def test_all_out_of_bounds_flagged(self):
        samples = [np.array([9.0, 9.0])]
        inside = [np.zeros(2, bool)]
        assert tensor_mean(samples, inside) == (0.0, False)

    def test_fiber_weighted_variant(self):
        samples = [np.array([0.0, 0.0, 0.0]), np.array([2.0])]
        inside = [np.ones(3, bool), np.ones(1, bool)]
        vertex, _ = tensor_mean(samples, inside)
        fiber, _ = tensor_mean(samples, inside, fiber_weighted=True)
        assert vertex == pytest.approx(0.5)
        assert fiber == pytest.approx(1.0)


class TestAsymmetry:
    def test_mirror_symmetric_is_zero(self):
        assert asymmetry((1.3, True), (1.3, True)) == (0.0, True)

    def test_signed_difference(self):
        assert asymmetry((2.0, True), (1.5, True)) == (0.5, True)

    def test_empty_side_flags(self):
        assert asymmetry((2.0, True), (0.0, False)) == (0.0, False)


class TestMatrices:
    def test_geometry_dataset_matrices(self, geometry_dataset):
        ds = geometry_dataset
        matrices = ds.matrices()
        assert set(matrices) == set(ds.region_labels)
        names = feature_names(ds.measures)
        for m in matrices.values():
            assert list(m.feature_names) == names
            assert m.n_rows == len(ds.records)
            # paired toy regions always have a homologue: dLR computable
            assert m.ok[:, len(names) // 2:].any()

    def test_whole_roi_mean_between_intra_and_inter(self, geometry_dataset):
        for matrix in geometry_dataset.matrices().values():
            for stem in ("MFA", "MMO"):
                v_all, ok_all = matrix.column(f"{stem}_all")
                v_in, ok_in = matrix.column(f"{stem}_intra")
                v_out, ok_out = matrix.column(f"{stem}_inter")
                rows = ok_all & ok_in & ok_out
                lo = np.minimum(v_in[rows], v_out[rows])
                hi = np.maximum(v_in[rows], v_out[rows])
                assert (v_all[rows] >= lo - 1e-9).all()
                assert (v_all[rows] <= hi + 1e-9).all()

    def test_missing_volume_names_scan_and_measure(self, geometry_dataset):
        ds = geometry_dataset
        record = ds.records[0]
        broken = type(record)(
            subject_id=record.subject_id,
            scan_id=record.scan_id,
            visit_date=record.visit_date,
            age_at_scan=record.age_at_scan,
            sex=record.sex,
            group_label=record.group_label,
            tracks_path=record.tracks_path,
            volume_paths={k: v for k, v in record.volume_paths.items() if k != "MO"},
        )
        with pytest.raises(MissingVolume, match="MO"):
            load_scan_data(broken, ds.root, ds.label_volume(), ds.measures)

    def test_delta_lr_negates_under_mirroring(self, geometry_dataset):
        """Mirroring all geometry about x=0 swaps hemispheres exactly."""
        ds = geometry_dataset
        label_volume = ds.label_volume()
        scans = [
            load_scan_data(r, ds.root, label_volume, ("FA",))
            for r in ds.records[:2]
        ]
        matrices = build_feature_matrices(scans, label_volume, ("FA",))

        mirrored = []
        for s in scans:
            flipped = [st * np.array([-1, 1, 1], dtype=np.float32)
                       for st in s.streamlines]
            mirrored.append(flipped)
        # mirror the volumes about world x = 0: reverse the x axis and move
        # the origin so world_x(new i) = -world_x(old dims-1-i)
        from dataclasses import replace

        def flip_volume(vol, **extra):
            data = vol.data[::-1].copy()
            affine = vol.affine.copy()
            affine[0, 3] = -(vol.affine[0, 3]
                             + vol.affine[0, 0] * (vol.dims[0] - 1))
            return replace(vol, data=data, affine=affine, **extra)

        # hemisphere tags must re-derive from geometry after the flip
        untagged = tuple(
            replace(r, hemisphere=None) for r in label_volume.atlas
        )
        flipped_labels = flip_volume(label_volume, atlas=untagged)
        from fiberlens.features.extract import ScanData
        from fiberlens.tract_io.bundles import assign_bundles
        from fiberlens.tract_io.volume import load_volume, sample_trilinear

        flipped_scans = []
        for s, flipped_streams in zip(scans, mirrored):
            fa = flip_volume(load_volume(ds.root / s.record.volume_paths["FA"]))
            samples, inside = [], []
            for st in flipped_streams:
                v, m = sample_trilinear(fa, np.asarray(st, dtype=np.float64))
                samples.append(v)
                inside.append(m)
            flipped_scans.append(
                ScanData(
                    record=s.record,
                    streamlines=flipped_streams,
                    assignments=assign_bundles(flipped_streams, flipped_labels),
                    lengths=s.lengths,
                    samples={"FA": samples},
                    inside={"FA": inside},
                )
            )
        flipped_matrices = build_feature_matrices(
            flipped_scans, flipped_labels, ("FA",)
        )
        for label in matrices:
            for name in matrices[label].feature_names:
                if not name.startswith("dLR_"):
                    continue
                orig, ok_a = matrices[label].column(name)
                flip, ok_b = flipped_matrices[label].column(name)
                rows = ok_a & ok_b
                np.testing.assert_allclose(flip[rows], -orig[rows], atol=1e-6)

    def test_csv_round_trip_exact(self, feature_dataset):
        matrix = feature_dataset.matrices()[1]
        again = FeatureMatrix.from_csv(
            matrix.to_csv(), region=matrix.region, region_name=matrix.region_name
        )
        assert again.feature_names == matrix.feature_names
        assert again.scan_ids == matrix.scan_ids
        assert again.groups == matrix.groups
        np.testing.assert_array_equal(again.values, matrix.values)
        np.testing.assert_array_equal(again.ok, matrix.ok)

    def test_42_region_catalogue(self, tmp_path):
        from fiberlens.dataset import load_dataset
        from fiberlens.synthetic import synth_features

        synth_features(tmp_path / "d", subjects=6, regions=42, seed=0)
        ds = load_dataset(tmp_path / "d")
        assert len(ds.matrices()) == 42

    def test_extraction_parallel_equals_serial(self, geometry_dataset):
        from concurrent.futures import ThreadPoolExecutor

        ds = geometry_dataset
        label_volume = ds.label_volume()
        records = sorted(ds.records, key=lambda r: r.scan_id)

        serial = [
            load_scan_data(r, ds.root, label_volume, ds.measures) for r in records
        ]
        with ThreadPoolExecutor(max_workers=4) as pool:
            parallel = list(
                pool.map(
                    lambda r: load_scan_data(r, ds.root, label_volume, ds.measures),
                    records,
                )
            )
        a = build_feature_matrices(serial, label_volume, ds.measures)
        b = build_feature_matrices(parallel, label_volume, ds.measures)
        for label in a:
            np.testing.assert_array_equal(a[label].values, b[label].values)
            np.testing.assert_array_equal(a[label].ok, b[label].ok)


def test_feature_name_catalogue():
    names = feature_names()
    assert len(names) == 48
    assert names[:3] == ["FN_all", "FN_intra", "FN_inter"]
    assert names[24] == "dLR_FN_all"
    assert len(base_feature_names(("FA",))) == 9  # FN, AFL, MFA x 3 scopes
