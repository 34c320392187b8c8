"""
Desk-scale reproductions. Deselected by default; run with `pytest -m slow`.

The UCI files are not bundled: point PREDCLUSTERS_AIRFOIL / PREDCLUSTERS_CONCRETE
at CSV copies with a header row and the outcome in the last column.
"""
import json
import os

import numpy as np
import pytest

from predictive_clusters.cli.main import main
from predictive_clusters.data_utils.dataset import load_csv, outcome_sd
from predictive_clusters.evolution.run_types import EvolutionConfig
from predictive_clusters.experiments.comparisons import collect_final_samples, multi_vs_single_rows
from predictive_clusters.experiments.experiment_config import ExperimentConfig
from predictive_clusters.experiments.results_io import load_run_results
from predictive_clusters.experiments.runner import run_baseline_pairs, run_experiment
from predictive_clusters.stats_utils.hypothesis_tests import SampleGroup, ttest_ind

pytestmark = pytest.mark.slow

AIRFOIL = os.environ.get("PREDCLUSTERS_AIRFOIL")
CONCRETE = os.environ.get("PREDCLUSTERS_CONCRETE")
TWO_BLOBS_CSV = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "two_blobs.csv")
DESK_SEARCH = EvolutionConfig(population_size=50, iterations=30, seed=0)


def assert_elitist(results):
    for result in results:
        if result.algorithm != "NSGA-II":
            continue
        for column in ("min_deviation", "min_mae"):
            series = [getattr(row, column) for row in result.generations]
            assert all(b <= a for a, b in zip(series, series[1:]))


@pytest.mark.skipif(not AIRFOIL, reason="PREDCLUSTERS_AIRFOIL not set")
def test_outcome_guidance_beats_deviation_only_search(tmp_path):
    config = ExperimentConfig(
        data_path=AIRFOIL, output_dir=str(tmp_path), models=(3,), replicates=10,
        evolution=DESK_SEARCH, jobs=-1,
    )
    outcome = run_baseline_pairs(config)
    assert not outcome.failed

    by_replicate = {}
    for result in outcome.results:
        by_replicate.setdefault(result.replicate, {})[result.algorithm] = result.final_values("mae").mean()
    wins = sum(pair["NSGA-II"] < pair["SOGA"] for pair in by_replicate.values())
    assert wins >= 8

    (row,) = multi_vs_single_rows(outcome.results)
    assert row.multi_mean < row.single_mean
    assert row.p_value < 0.05
    assert_elitist(outcome.results)


@pytest.mark.skipif(not CONCRETE, reason="PREDCLUSTERS_CONCRETE not set")
def test_cluster_regression_beats_constant_prediction(tmp_path):
    config = ExperimentConfig(
        data_path=CONCRETE, output_dir=str(tmp_path), models=(1, 2, 3, 4), replicates=5,
        evolution=DESK_SEARCH, jobs=-1,
    )
    outcome = run_experiment(config)
    assert not outcome.failed
    samples = collect_final_samples(outcome.results, "mae")
    lr = np.concatenate([samples["model 3"], samples["model 4"]])
    cp = np.concatenate([samples["model 1"], samples["model 2"]])
    test = ttest_ind(SampleGroup("LR", lr), SampleGroup("CP", cp))
    assert lr.mean() < cp.mean()
    assert test.p_value < 0.05
    assert_elitist(outcome.results)


def test_every_model_is_reproducible(tmp_path):
    dataset = load_csv(TWO_BLOBS_CSV)
    search = EvolutionConfig(population_size=50, iterations=20, seed=3)
    runs = []
    for name in ("a", "b"):
        config = ExperimentConfig(data_path=TWO_BLOBS_CSV, output_dir=str(tmp_path / name), evolution=search)
        runs.append(run_experiment(config, dataset))
    for name in sorted(os.listdir(runs[0].output_dir)):
        first_dir = os.path.join(runs[0].output_dir, name)
        if not os.path.isdir(first_dir):
            continue
        for file_name in ("generations.csv", "final_population.csv"):
            with open(os.path.join(first_dir, file_name), "rb") as a, \
                    open(os.path.join(runs[1].output_dir, name, file_name), "rb") as b:
                assert a.read() == b.read()
    assert_elitist(runs[0].results)


def test_matrix_smoke_on_bundled_blobs(tmp_path):
    out = str(tmp_path / "matrix")
    argv = ["matrix", "--data", TWO_BLOBS_CSV, "--pop", "100", "--iters", "100", "--jobs", "-1", "--out", out]
    assert main(argv) == 0
    with open(os.path.join(out, "manifest.json"), encoding="utf-8") as f:
        manifest = json.load(f)
    assert [entry["status"] for entry in manifest["runs"]] == ["ok"] * 8
    assert os.path.isfile(os.path.join(out, "comparison.json"))

    threshold = 0.1 * outcome_sd(load_csv(TWO_BLOBS_CSV))
    (model_3,) = [r for r in load_run_results([out]) if r.model.id == 3]
    assert any(ind.k == 2 and ind.objectives.mae < threshold for ind in model_3.front(1))
