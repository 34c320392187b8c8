import json
import os
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from predictive_clusters.clustering.objectives import ObjectiveValues
from predictive_clusters.evolution.run_types import (
    EvolutionConfig,
    Individual,
    RunResult,
    build_model_matrix,
    find_model,
    model_by_id,
)
from predictive_clusters.experiments.comparisons import (
    collect_final_samples,
    compare_multi_vs_single,
    compare_samples,
    format_comparison_table,
    format_multi_vs_single_table,
    format_pairwise_table,
    multi_vs_single_rows,
    result_label,
)
from predictive_clusters.experiments.experiment_config import (
    ALL_MODELS,
    ExperimentConfig,
    config_hash,
    experiment_config_from_settings,
    run_seed,
)
from predictive_clusters.experiments.results_io import (
    MANIFEST_FILE,
    load_run_results,
    read_generations,
    read_run_result,
)
from predictive_clusters.experiments.runner import run_baseline_pairs, run_experiment
from predictive_clusters.shared_utils.config_manager import DEFAULTS


def experiment(tmp_path, name="exp", **kwargs):
    settings = dict(
        data_path="blobs.csv",
        output_dir=str(tmp_path / name),
        models=(3,),
        evolution=EvolutionConfig(population_size=8, iterations=2, seed=5),
    )
    settings.update(kwargs)
    return ExperimentConfig(**settings)


def fake_result(model_id, maes, algorithm="NSGA-II", replicate=0, deviations=None):
    deviations = deviations if deviations is not None else [1.0] * len(maes)
    return RunResult(
        model=model_by_id(model_id),
        algorithm=algorithm,
        seed=0,
        config=EvolutionConfig(),
        population=[
            Individual(genotype=np.array([1]), objectives=ObjectiveValues(float(d), float(m)), k=1, rank=1)
            for d, m in zip(deviations, maes)
        ],
        replicate=replicate,
    )


def unit_noise(n=50):
    e = np.linspace(-1.0, 1.0, n)
    return (e - e.mean()) / e.std()


def read_json(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


# --- Model matrix and seeds ---

def test_model_matrix_mapping():
    specs = build_model_matrix()
    assert [s.id for s in specs] == list(range(1, 9))
    as_tuple = {s.id: (s.init, s.regression, s.update) for s in specs}
    assert as_tuple[1] == ("RSO", "CP", "CM")
    assert as_tuple[3] == ("RSO", "LR", "CM")
    assert as_tuple[5] == ("RSO", "CP", "SGD")
    assert as_tuple[8] == ("RC", "LR", "SGD")
    assert len(set(as_tuple.values())) == 8
    assert find_model("RC", "CP", "CM").id == 2


def test_unknown_model():
    with pytest.raises(ValueError):
        model_by_id(9)


def test_run_seeds_and_run_config(tmp_path):
    assert run_seed(0, 3, 2) == 30002
    config = experiment(tmp_path, models=(6,), evolution=EvolutionConfig(seed=7))
    run_config = config.run_config(model_by_id(6), 4)
    assert run_config.seed == 7 + 60004
    assert (run_config.init_method, run_config.regression_mode) == ("RC", "CP")


@pytest.mark.parametrize("kwargs", [
    {"models": (3, 3)}, {"models": (9,)}, {"models": ()}, {"replicates": 0},
    {"replicate_mode": "median"}, {"alpha": 1.0}, {"jobs": 0},
])
def test_experiment_config_validation(tmp_path, kwargs):
    with pytest.raises(ValueError):
        experiment(tmp_path, **kwargs)


def test_config_hash_ignores_output_and_jobs(tmp_path):
    base = experiment(tmp_path)
    assert config_hash(base) == config_hash(replace(base, output_dir="elsewhere", jobs=4))
    assert config_hash(base) != config_hash(replace(base, evolution=replace(base.evolution, seed=6)))
    assert len(config_hash(base)) == 64


def test_config_from_settings():
    config = experiment_config_from_settings(dict(DEFAULTS), "data.csv", "out")
    assert config.models == ALL_MODELS
    assert config.evolution.population_size == 100
    assert config.sgd.c_gamma == 2000.0
    partial = {k: v for k, v in DEFAULTS.items() if k != "iterations"}
    with pytest.raises(ValueError):
        experiment_config_from_settings(partial, "data.csv", "out")


# --- Running and persistence ---

def test_run_experiment_writes_artifacts(tmp_path, blobs):
    config = experiment(tmp_path)
    outcome = run_experiment(config, blobs)
    run_dir = os.path.join(config.output_dir, "run_3_0")
    for name in ("result.json", "generations.csv", "final_population.csv"):
        assert os.path.isfile(os.path.join(run_dir, name))

    manifest = read_json(outcome.manifest_path)
    assert manifest["config_hash"] == config_hash(config)
    assert manifest["runs"] == [
        {"model": 3, "replicate": 0, "algorithm": "NSGA-II", "seed": 30005, "run_dir": "run_3_0", "status": "ok"}
    ]
    assert len(read_generations(run_dir)) == 3
    assert len(pd.read_csv(os.path.join(run_dir, "final_population.csv"))) == 8
    assert read_json(os.path.join(run_dir, "result.json"))["model"] == {
        "id": 3, "init": "RSO", "regression": "LR", "update": "CM",
    }


def test_persisted_result_matches_memory(tmp_path, blobs):
    config = experiment(tmp_path, models=(7,))
    outcome = run_experiment(config, blobs)
    loaded = read_run_result(os.path.join(config.output_dir, "run_7_0"))
    original = outcome.results[0]
    assert loaded.algorithm == "SGD"
    assert loaded.generations == original.generations
    assert loaded.final_values("mae").tolist() == original.final_values("mae").tolist()
    frame = read_generations(os.path.join(config.output_dir, "run_7_0"))
    assert frame["min_mae"].tolist() == [row.min_mae for row in original.generations]


def test_same_seed_gives_identical_files(tmp_path, blobs):
    first = run_experiment(experiment(tmp_path, "a"), blobs)
    second = run_experiment(experiment(tmp_path, "b"), blobs)
    for name in ("generations.csv", "final_population.csv"):
        with open(os.path.join(first.output_dir, "run_3_0", name), "rb") as f:
            a = f.read()
        with open(os.path.join(second.output_dir, "run_3_0", name), "rb") as f:
            b = f.read()
        assert a == b
    results = [read_json(os.path.join(o.output_dir, "run_3_0", "result.json")) for o in (first, second)]
    for data in results:
        data.pop("timing")
    assert results[0] == results[1]


def test_parallel_jobs_match_sequential(tmp_path, blobs):
    sequential = run_experiment(experiment(tmp_path, "seq", models=(3, 5)), blobs)
    parallel = run_experiment(experiment(tmp_path, "par", models=(3, 5), jobs=2), blobs)
    for a, b in zip(sequential.results, parallel.results):
        assert a.to_dict()["final_population"] == b.to_dict()["final_population"]
    assert [e["run_dir"] for e in parallel.manifest["runs"]] == ["run_3_0", "run_5_0"]


def test_failed_run_is_recorded(tmp_path, blobs, monkeypatch):
    def broken(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr("predictive_clusters.experiments.runner.run_nsga2", broken)
    outcome = run_experiment(experiment(tmp_path, models=(3, 5)), blobs)
    assert [r.model.id for r in outcome.results] == [5]
    assert outcome.failed == [
        {"model": 3, "replicate": 0, "algorithm": "NSGA-II", "seed": 30005, "run_dir": "run_3_0",
         "status": "failed", "error": "boom"}
    ]
    loaded = load_run_results([outcome.output_dir])
    assert [r.model.id for r in loaded] == [5]


def test_load_run_results_paths(tmp_path, blobs):
    config = experiment(tmp_path, models=(3, 4), replicates=2)
    run_experiment(config, blobs)
    assert len(load_run_results([config.output_dir])) == 4
    assert len(load_run_results([os.path.join(config.output_dir, "run_4_1")])) == 1
    assert len(load_run_results([os.path.join(config.output_dir, "run_4_1", "result.json")])) == 1

    os.remove(os.path.join(config.output_dir, MANIFEST_FILE))
    assert len(load_run_results([config.output_dir])) == 4
    with pytest.raises(FileNotFoundError):
        load_run_results([str(tmp_path / "missing")])


# --- Samples and comparisons ---

def test_replicate_modes():
    results = [fake_result(3, [1.0, 2.0, 3.0], replicate=r) for r in range(2)]
    results.append(fake_result(4, [5.0, 7.0, 9.0]))
    pooled = collect_final_samples(results, "mae", "pool")
    assert list(pooled) == ["model 3", "model 4"]
    assert pooled["model 3"].tolist() == [1.0, 2.0, 3.0, 1.0, 2.0, 3.0]
    means = collect_final_samples(results, "mae", "replicate_means")
    assert means["model 3"].tolist() == [2.0, 2.0]
    assert means["model 4"].tolist() == [7.0]


def test_result_labels():
    assert result_label(fake_result(2, [1.0])) == "model 2"
    assert result_label(fake_result(2, [1.0], algorithm="SOGA")) == "GA (model 2)"


def test_both_measures_is_the_intersection():
    noise = unit_noise()
    samples = {
        "deviation": {"model 3": noise, "model 5": 0.1 + noise, "model 7": 50.0 + noise},
        "mae": {"model 3": noise, "model 5": 50.0 + noise, "model 7": 0.1 + noise},
    }
    comparison = compare_samples(samples)
    assert comparison.reports["deviation"].winners == ["model 3", "model 5"]
    assert comparison.reports["mae"].winners == ["model 3", "model 7"]
    assert comparison.both_measures == ["model 3"]
    text = format_comparison_table(comparison)
    assert "Both measures" in text and "model 3" in text
    assert "Mean difference (I-J)" in text


def test_pairwise_table_lists_every_ordered_pair():
    comparison = compare_samples({"mae": {"a": [1, 2, 3], "b": [2, 3, 4], "c": [3, 4, 5]}})
    report = comparison.reports["mae"]
    assert report.anova.f_statistic == pytest.approx(3.0)
    p_ab, p_ac = report.pairwise[0][1], report.pairwise[0][2]
    # q = 3.46 for a vs c stays below the 5% critical value 4.34 (k=3, df=6).
    assert p_ac < p_ab
    assert p_ac > 0.05

    lines = format_pairwise_table(report).splitlines()
    assert lines[0].split() == ["(I)", "Group", "(J)", "Group", "Mean", "difference", "(I-J)", "Sig."]
    body = [line.split() for line in lines[2:]]
    assert [(row[0], row[1]) for row in body] == [
        ("a", "b"), ("a", "c"), ("b", "a"), ("b", "c"), ("c", "a"), ("c", "b"),
    ]
    assert [float(row[2]) for row in body] == [-1.0, -2.0, 1.0, -1.0, 2.0, 1.0]
    assert body[0][3] == f"{p_ab:.4f}"
    assert body[4][3] == f"{p_ac:.4f}"


def test_comparison_ignores_group_order():
    noise = unit_noise()
    forward = {"deviation": {"model 1": noise, "model 2": 0.3 + noise, "model 4": 2.0 + noise}}
    backward = {"deviation": dict(reversed(list(forward["deviation"].items())))}
    assert compare_samples(forward).to_dict() == compare_samples(backward).to_dict()


def test_multi_vs_single_rows():
    results = [
        fake_result(1, [1.0, 2.0, 3.0]),
        fake_result(1, [1.0, 2.0, 3.0], algorithm="SOGA"),
        fake_result(2, [1.0, 2.0, 3.0]),
        fake_result(2, [4.0, 5.0, 6.0], algorithm="SOGA"),
        fake_result(3, [1.0, 2.0, 3.0]),
    ]
    rows = multi_vs_single_rows(results)
    assert [row.model for row in rows] == ["model 1", "model 2"]
    assert rows[0].p_value == 1.0
    assert rows[1].t_statistic == pytest.approx(-3.674, abs=1e-3)
    assert rows[1].p_value == pytest.approx(0.0213, abs=0.002)
    assert (rows[1].multi_mean, rows[1].single_mean) == (2.0, 5.0)

    lines = format_multi_vs_single_table(rows).splitlines()
    assert lines[0].split() == ["model", "1", "model", "2"]
    assert lines[2].startswith("Multi-objective mean MAE")
    assert lines[4].startswith("Sig.")


def test_baseline_pairs_share_seeds(tmp_path, blobs):
    config = experiment(tmp_path, models=(1,))
    outcome = run_baseline_pairs(config, blobs)
    runs = outcome.manifest["runs"]
    assert [(e["run_dir"], e["algorithm"]) for e in runs] == [("run_1_0", "NSGA-II"), ("soga_1_0", "SOGA")]
    assert runs[0]["seed"] == runs[1]["seed"]
    rows = compare_multi_vs_single(replace(config, output_dir=str(tmp_path / "again")), dataset=blobs)
    assert [row.model for row in rows] == ["model 1"]


def test_baseline_rejects_sgd_models(tmp_path, blobs):
    with pytest.raises(ValueError):
        compare_multi_vs_single(experiment(tmp_path), models=(5,), dataset=blobs)
