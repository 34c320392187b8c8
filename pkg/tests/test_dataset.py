import os

import numpy as np
import pytest

from predictive_clusters.data_utils.dataset import (
    CsvParseError,
    DatasetError,
    DatasetNotFoundError,
    EmptyDatasetError,
    TargetNotFoundError,
    dataset_summary,
    load_csv,
    make_two_blobs,
    normalize,
    outcome_sd,
    write_csv,
)

TWO_BLOBS_CSV = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "two_blobs.csv")


def test_minimal_file_target_last(write_csv_text):
    ds = load_csv(write_csv_text("a,b\n1,2\n3,4\n"))
    np.testing.assert_array_equal(ds.features, [[1.0], [3.0]])
    np.testing.assert_array_equal(ds.outcome, [2.0, 4.0])
    assert ds.feature_names == ("a",)
    assert ds.outcome_name == "b"


@pytest.mark.parametrize("target", ["y", 1, "1"])
def test_target_by_name_or_index(write_csv_text, target):
    ds = load_csv(write_csv_text("x1,y,x2\n1,10,2\n3,30,4\n5,50,6\n"), target=target)
    np.testing.assert_array_equal(ds.outcome, [10.0, 30.0, 50.0])
    np.testing.assert_array_equal(ds.features, [[1, 2], [3, 4], [5, 6]])
    assert ds.feature_names == ("x1", "x2")


def test_byte_order_mark_is_not_part_of_the_first_column(tmp_path):
    path = tmp_path / "bom.csv"
    path.write_bytes(b"\xef\xbb\xbfx1,y\n1,10\n2,20\n")
    ds = load_csv(str(path), target="y")
    assert ds.feature_names == ("x1",)
    assert load_csv(str(path), target="x1").outcome_name == "x1"


def test_outcome_never_leaks_into_features(write_csv_text):
    ds = load_csv(write_csv_text("x,y\n1,100\n2,200\n3,300\n"))
    assert ds.n_features == 1
    assert not np.any(np.isin(ds.features, ds.outcome))


def test_missing_file():
    with pytest.raises(DatasetNotFoundError) as info:
        load_csv("does/not/exist.csv")
    assert isinstance(info.value, FileNotFoundError)


def test_parse_error_reports_row_and_column(write_csv_text):
    with pytest.raises(CsvParseError) as info:
        load_csv(write_csv_text("a,b\n1,2\n3,oops\n4,5\n"))
    assert (info.value.row, info.value.col) == (2, 2)


def test_empty_cell_is_a_parse_error(write_csv_text):
    with pytest.raises(CsvParseError) as info:
        load_csv(write_csv_text("a,b,c\n1,2,3\n4,,6\n"))
    assert (info.value.row, info.value.col) == (2, 2)


@pytest.mark.parametrize("target", ["nope", 5, "-1"])
def test_unknown_target(write_csv_text, target):
    with pytest.raises(TargetNotFoundError):
        load_csv(write_csv_text("a,b\n1,2\n3,4\n"), target=target)


def test_single_row_is_empty_dataset(write_csv_text):
    with pytest.raises(EmptyDatasetError):
        load_csv(write_csv_text("a,b\n1,2\n"))


def test_single_column_is_empty_dataset(write_csv_text):
    with pytest.raises(EmptyDatasetError):
        load_csv(write_csv_text("y\n1\n2\n"))


def test_unknown_normalization(write_csv_text):
    with pytest.raises(DatasetError):
        load_csv(write_csv_text("a,b\n1,2\n3,4\n"), normalization="log")


# --- Normalization ---

def test_normalize_none_is_identity(blobs):
    assert normalize(blobs, "none") is blobs


def test_minmax_column(write_csv_text):
    ds = load_csv(write_csv_text("a,y\n0,1\n5,2\n10,3\n"), normalization="minmax")
    np.testing.assert_allclose(ds.features[:, 0], [0.0, 0.5, 1.0])
    assert ds.transform_params["center"] == [0.0]
    assert ds.transform_params["scale"] == [10.0]


def test_zscore_uses_population_sd(write_csv_text):
    ds = load_csv(write_csv_text("a,y\n2,1\n4,2\n6,3\n"), normalization="zscore")
    sd = np.sqrt(8.0 / 3.0)
    np.testing.assert_allclose(ds.features[:, 0], [-2.0 / sd, 0.0, 2.0 / sd])


def test_constant_column_maps_to_zero(write_csv_text):
    path = write_csv_text("a,b,y\n7,1,1\n7,2,2\n7,3,3\n")
    for mode in ("zscore", "minmax"):
        ds = load_csv(path, normalization=mode)
        np.testing.assert_array_equal(ds.features[:, 0], [0.0, 0.0, 0.0])
        assert ds.transform_params["constant_columns"] == ["a"]


def test_normalized_columns_have_declared_property(blobs):
    z = normalize(blobs, "zscore").features
    assert np.all(np.abs(z.mean(axis=0)) < 1e-9)
    assert np.all(np.abs(z.std(axis=0) - 1.0) < 1e-9)
    m = normalize(blobs, "minmax").features
    np.testing.assert_array_equal(m.min(axis=0), 0.0)
    np.testing.assert_array_equal(m.max(axis=0), 1.0)


@pytest.mark.parametrize("mode", ["none", "zscore", "minmax"])
def test_outcome_untouched_by_normalization(blobs, mode):
    np.testing.assert_array_equal(normalize(blobs, mode).outcome, blobs.outcome)


def test_arrays_are_read_only(blobs):
    with pytest.raises(ValueError):
        blobs.features[0, 0] = 1.0


# --- Writing and the bundled data ---

def test_write_then_reload_round_trip(blobs, tmp_path):
    path = str(tmp_path / "blobs.csv")
    write_csv(blobs, path)
    reloaded = load_csv(path)
    np.testing.assert_allclose(reloaded.features, blobs.features, rtol=0, atol=1e-12)
    np.testing.assert_allclose(reloaded.outcome, blobs.outcome, rtol=0, atol=1e-12)
    assert reloaded.feature_names == blobs.feature_names


def test_make_two_blobs_is_seeded():
    a, b = make_two_blobs(n=30, seed=5), make_two_blobs(n=30, seed=5)
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.outcome, b.outcome)
    assert a.features.shape == (30, 2)
    # First blob is centred at the origin, second at (10, 10).
    assert a.features[:15].mean() < 2.0 < 8.0 < a.features[15:].mean()


def test_bundled_two_blobs_file():
    ds = load_csv(TWO_BLOBS_CSV)
    assert (ds.n_observations, ds.n_features) == (150, 2)
    assert ds.outcome_name == "y"
    assert outcome_sd(ds) > 1.0


def test_summary_is_json_ready(blobs):
    summary = dataset_summary(blobs)
    assert summary["n_observations"] == 40
    assert summary["feature_names"] == ["x1", "x2"]
