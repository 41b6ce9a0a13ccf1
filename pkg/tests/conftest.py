import numpy as np
import pytest

from fiberlens.cohort import select_cohort
from fiberlens.dataset import load_dataset
from fiberlens.ml.config import PipelineConfig
from fiberlens.ml.folds import make_fold_plan
from fiberlens.synthetic import synth_features, synth_geometry


@pytest.fixture(scope="session")
def feature_dataset(tmp_path_factory):
    """Small feature-level dataset with one planted pair of regions."""
    root = tmp_path_factory.mktemp("feat_ds") / "toy"
    synth_features(
        root, subjects=40, regions=6,
        effect_regions=[1, 2], effect_features=["MFA_all", "MMO_all", "AFL_all"],
        effect_size=1.5, seed=11,
    )
    return load_dataset(root)


@pytest.fixture(scope="session")
def geometry_dataset(tmp_path_factory):
    from fiberlens.dataset import extract_features

    root = tmp_path_factory.mktemp("geom_ds") / "toygeo"
    synth_geometry(
        root, subjects=8, pairs=2, fibers_per_bundle=8, points_per_fiber=12,
        effect_regions=[1], effect_measures=["FA"], effect_size=0.2, seed=5,
    )
    dataset = load_dataset(root)
    extract_features(dataset)
    return dataset


@pytest.fixture(scope="session")
def small_run(feature_dataset):
    """A completed pipeline over the small dataset (c=3 for speed)."""
    from fiberlens.ml.pipeline import run_all_regions
    from fiberlens.ml.report import SaliencyReport

    config = PipelineConfig(c=3, seed=4).validate()
    spec = select_cohort(feature_dataset.records)
    plan = make_fold_plan(spec.disease_subjects, spec.control_subjects, config)
    results = run_all_regions(feature_dataset.matrices(), plan, config)
    report = SaliencyReport(
        config=config,
        cohort={
            "disease_subjects": list(spec.disease_subjects),
            "control_subjects": list(spec.control_subjects),
        },
        regions=results,
        region_names={r: feature_dataset.region_name(r) for r in results},
    )
    return feature_dataset, spec, plan, config, report


def planted_matrix(n_rows=120, n_features=40, planted=(3, 11, 19, 27, 35),
                   shift=1.0, seed=0):
    """Synthetic (X, y, planted_idx): disease rows shifted on planted columns."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n_rows, n_features))
    y = np.zeros(n_rows, dtype=np.int64)
    y[: n_rows // 2] = 1
    for j in planted:
        X[y == 1, j] += shift
    return X, y, list(planted)
