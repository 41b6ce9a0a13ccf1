"""Command-line entry points.

Exit codes: 0 ok, 1 domain error (bad data, degenerate cohort, ...),
2 usage error (unknown flags, missing paths).
"""

import functools
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import _kernels
from .cohort import CohortSpec, demographics, select_cohort
from .dataset import extract_features, load_dataset, region_csv_name, write_feature_csvs
from .errors import FiberlensError
from .ml.config import PipelineConfig
from .ml.folds import make_fold_plan
from .ml.pipeline import run_all_regions
from .ml.report import SaliencyReport
from .synthetic import synth_features, synth_geometry


def domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FiberlensError as exc:
            raise click.ClickException(f"{type(exc).__name__}: {exc}")
    return wrapper


@click.group()
def main():
    """Cohort saliency engine for fiber-tract studies."""


# --------------------------------------------------------------------- synth

@main.group()
def synth():
    """Generate synthetic datasets."""


@synth.command("features")
@click.argument("out_dir", type=click.Path(path_type=Path))
@click.option("--subjects", default=136, show_default=True)
@click.option("--regions", default=42, show_default=True)
@click.option("--features-per-region", default=None, type=int,
              help="generic feature count instead of the canonical catalogue")
@click.option("--visits", default=1, show_default=True)
@click.option("--effect-regions", default="", help="comma-separated region labels")
@click.option("--effect-features", default="", help="comma-separated feature names")
@click.option("--effect-size", default=0.0, show_default=True,
              help="group shift in SD units")
@click.option("--seed", default=0, show_default=True)
@domain_errors
def synth_features_cmd(out_dir, subjects, regions, features_per_region, visits,
                       effect_regions, effect_features, effect_size, seed):
    """Feature-level dataset with an optional planted group effect."""
    truth = synth_features(
        out_dir,
        subjects=subjects,
        regions=regions,
        features_per_region=features_per_region,
        visits=visits,
        effect_regions=[int(r) for r in effect_regions.split(",") if r],
        effect_features=[f for f in effect_features.split(",") if f],
        effect_size=effect_size,
        seed=seed,
    )
    click.echo(json.dumps(truth, sort_keys=True))


@synth.command("geometry")
@click.argument("out_dir", type=click.Path(path_type=Path))
@click.option("--subjects", default=12, show_default=True)
@click.option("--pairs", default=3, show_default=True)
@click.option("--fibers", default=12, show_default=True)
@click.option("--effect-regions", default="")
@click.option("--effect-measures", default="")
@click.option("--effect-size", default=0.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@domain_errors
def synth_geometry_cmd(out_dir, subjects, pairs, fibers, effect_regions,
                       effect_measures, effect_size, seed):
    """Geometry-level dataset (tracks + volumes) for end-to-end runs."""
    truth = synth_geometry(
        out_dir,
        subjects=subjects,
        pairs=pairs,
        fibers_per_bundle=fibers,
        effect_regions=[int(r) for r in effect_regions.split(",") if r],
        effect_measures=[m for m in effect_measures.split(",") if m],
        effect_size=effect_size,
        seed=seed,
    )
    click.echo(json.dumps(truth, sort_keys=True))


# -------------------------------------------------------------------- ingest

@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, path_type=Path))
@domain_errors
def ingest(dataset_dir):
    """Validate a dataset directory and print a summary."""
    dataset = load_dataset(dataset_dir)
    subjects = {r.subject_id for r in dataset.records}
    groups = {}
    for r in dataset.records:
        groups.setdefault(r.group_label, set()).add(r.subject_id)
    click.echo(
        json.dumps(
            {
                "name": dataset.name,
                "scans": len(dataset.records),
                "subjects": len(subjects),
                "groups": {g: len(s) for g, s in sorted(groups.items())},
                "regions": len(dataset.regions),
                "has_features": dataset.has_features(),
                "has_geometry": dataset.label_volume_path is not None,
            },
            sort_keys=True,
        )
    )


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, path_type=Path))
@click.option("--fiber-weighted", is_flag=True,
              help="average tensor measures per fiber instead of per vertex")
@domain_errors
def extract(dataset_dir, fiber_weighted):
    """Compute per-region feature CSVs from raw tracks and volumes."""
    dataset = load_dataset(dataset_dir)
    matrices = extract_features(dataset, fiber_weighted=fiber_weighted)
    click.echo(f"extracted {len(matrices)} region matrices "
               f"({len(dataset.records)} scans)")


# -------------------------------------------------------------------- cohort

@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, path_type=Path))
@click.option("--age-min", type=float, default=None)
@click.option("--age-max", type=float, default=None)
@click.option("--balance", is_flag=True)
@click.option("--seed", default=0, show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None)
@domain_errors
def cohort(dataset_dir, age_min, age_max, balance, seed, output):
    """Select a disease/control cohort and write its spec JSON."""
    dataset = load_dataset(dataset_dir)
    age_range = None
    if age_min is not None or age_max is not None:
        age_range = (
            age_min if age_min is not None else -np.inf,
            age_max if age_max is not None else np.inf,
        )
    spec = select_cohort(dataset.records, age_range=age_range,
                         balance=balance, seed=seed)
    doc = {"spec": spec.to_dict(), "demographics": demographics(spec, dataset.records)}
    text = json.dumps(doc, indent=1, sort_keys=True)
    if output:
        output.write_text(text)
        click.echo(f"wrote {output}")
    else:
        click.echo(text)


# ----------------------------------------------------------------------- run

@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, path_type=Path))
@click.option("--k", default=5, show_default=True, help="CV folds")
@click.option("--c", default=10, show_default=True, help="CV repetitions")
@click.option("--trees", default=150, show_default=True)
@click.option("--top-m", default="sqrt", show_default=True)
@click.option("--cost", default=1.0, show_default=True, help="SVM cost")
@click.option("--seed", default=0, show_default=True)
@click.option("--jobs", default=1, show_default=True, help="parallel region workers")
@click.option("--cohort-file", type=click.Path(exists=True, path_type=Path),
              default=None, help="cohort spec JSON from the cohort command")
@click.option("--features", "features_dir", default=None,
              help="alternative features directory (e.g. an export)")
@click.option("--subject-rows", type=click.Choice(["scans", "mean"]),
              default="scans", show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path),
              default=Path("report.json"), show_default=True)
@click.option("--quiet", is_flag=True)
@domain_errors
def run(dataset_dir, k, c, trees, top_m, cost, seed, jobs, cohort_file,
        features_dir, subject_rows, output, quiet):
    """Run the full saliency pipeline and write the report JSON."""
    dataset = load_dataset(dataset_dir)
    config = PipelineConfig(
        k=k, c=c, n_trees=trees,
        top_m=top_m if top_m == "sqrt" else int(top_m),
        svm_cost=cost, seed=seed, subject_rows=subject_rows,
    ).validate()

    if cohort_file:
        doc = json.loads(Path(cohort_file).read_text())
        spec = CohortSpec.from_dict(doc.get("spec", doc))
    else:
        spec = select_cohort(dataset.records)

    plan = make_fold_plan(spec.disease_subjects, spec.control_subjects, config)
    matrices = dataset.matrices(features_dir)

    started = time.perf_counter()

    def progress(done, total):
        if not quiet:
            click.echo(f"\r[{done}/{total}] regions", nl=(done == total), err=True)

    results = run_all_regions(matrices, plan, config, jobs=jobs,
                              progress=progress)
    elapsed = time.perf_counter() - started

    report = SaliencyReport(
        config=config,
        cohort={
            "disease_subjects": list(spec.disease_subjects),
            "control_subjects": list(spec.control_subjects),
        },
        regions=results,
        region_names={label: dataset.region_name(label) for label in results},
    )
    output.write_text(report.to_json())
    if not quiet:
        best = report.order[0]
        top = report.regions[best]
        click.echo(
            f"{len(results)} regions in {elapsed:.1f}s; top region {best} "
            f"({top.region_name}) accuracy "
            f"{top.saliency:.3f} +/- {top.saliency_std:.3f}",
            err=True,
        )
    click.echo(str(output))


# -------------------------------------------------------------------- export

@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, path_type=Path))
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True,
              help="directory for the exported per-region CSV files")
@domain_errors
def export(dataset_dir, output):
    """Export per-region feature matrices as CSV."""
    dataset = load_dataset(dataset_dir)
    matrices = dataset.matrices()
    write_feature_csvs(output, matrices)
    click.echo(f"wrote {len(matrices)} files under {output}")


# --------------------------------------------------------------------- serve

@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True,
              envvar="FIBERLENS_PORT")
@click.option("--data-dir", type=click.Path(path_type=Path), default=None,
              envvar="FIBERLENS_DATA_DIR",
              help="dataset directory registered at startup")
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None,
              envvar="FIBERLENS_CACHE_DIR")
@click.option("--jobs", default=1, show_default=True,
              envvar="FIBERLENS_JOBS", help="parallel region workers")
@click.option("--ui", "ui_dir", type=click.Path(path_type=Path), default=None,
              envvar="FIBERLENS_UI_DIR",
              help="frontend directory to mount at /ui")
@domain_errors
def serve(host, port, data_dir, cache_dir, jobs, ui_dir):
    """Start the HTTP service."""
    import uvicorn

    from .service.app import create_app

    app = create_app(data_dir=data_dir, cache_dir=cache_dir, jobs=jobs,
                     ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


# --------------------------------------------------------------------- bench

@main.command()
@click.option("--rows", default=109, show_default=True)
@click.option("--features", default=48, show_default=True)
@click.option("--trees", default=150, show_default=True)
@click.option("--repeats", default=5, show_default=True)
def bench(rows, features, trees, repeats):
    """Benchmark the compiled kernels against the pure-Python fallback."""
    from ._kernels import fallback

    rng = np.random.default_rng(0)
    X = rng.normal(size=(rows, features))
    y = (X[:, 0] + rng.normal(size=rows) > 0).astype(np.int64)
    n_cand = max(1, int(np.ceil(np.sqrt(features))))

    def time_impl(fn, *args):
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn(*args)
            best = min(best, time.perf_counter() - t0)
        return best

    click.echo(f"active implementation: {_kernels.IMPLEMENTATION}")
    t_fb = time_impl(fallback.tree_importance_raw, X, y, trees, n_cand, 7)
    click.echo(f"trees  fallback: {t_fb * 1e3:9.1f} ms")
    if _kernels.HAVE_COMPILED:
        t_c = time_impl(_kernels.compiled.tree_importance_raw, X, y, trees, n_cand, 7)
        same = np.array_equal(
            _kernels.compiled.tree_importance_raw(X, y, trees, n_cand, 7),
            fallback.tree_importance_raw(X, y, trees, n_cand, 7),
        )
        click.echo(f"trees  compiled: {t_c * 1e3:9.1f} ms   "
                   f"speedup x{t_fb / t_c:.1f}   bitwise-equal: {same}")

    ys = np.where(y > 0, 1.0, -1.0)
    Xa = np.hstack([X, np.ones((rows, 1))])
    t_fb = time_impl(fallback.svm_dual_cd, Xa, ys, 1.0, 1e-6, 4000)
    click.echo(f"svm    fallback: {t_fb * 1e3:9.1f} ms")
    if _kernels.HAVE_COMPILED:
        t_c = time_impl(_kernels.compiled.svm_dual_cd, Xa, ys, 1.0, 1e-6, 4000)
        click.echo(f"svm    compiled: {t_c * 1e3:9.1f} ms   "
                   f"speedup x{t_fb / t_c:.1f}")


if __name__ == "__main__":
    sys.exit(main())
