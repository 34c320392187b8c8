import numpy as np
import pytest

from predictive_clusters.data_utils.dataset import Dataset, make_two_blobs
from predictive_clusters.evolution.run_types import EvolutionConfig
from predictive_clusters.shared_utils import config_manager


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """No stray predclusters.json, cached config or seed variable leaks into a test."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(config_manager.SEED_ENV_VAR, raising=False)
    config_manager.clear_config_cache()
    yield
    config_manager.clear_config_cache()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def blobs():
    """40-row two-blob dataset: small enough for full search runs in tests."""
    return make_two_blobs(n=40, seed=3)


@pytest.fixture
def tiny_dataset():
    features = np.array([[0.0, 0.0], [2.0, 0.0], [4.0, 6.0], [10.0, 10.0], [11.0, 9.0], [12.0, 12.0], [0.5, 1.0]])
    outcome = np.array([1.0, 3.0, 5.0, 20.0, 21.0, 25.0, 2.0])
    return Dataset(features, outcome, ("x1", "x2"), "y", "synthetic:tiny")


@pytest.fixture
def tiny_config():
    return EvolutionConfig(population_size=12, iterations=5, seed=11)


@pytest.fixture
def write_csv_text(tmp_path):
    """Writes raw CSV text to a file under tmp_path and returns its path."""
    def _write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write
