"""
Loading, validation and optional normalisation of tabular data, separating the
feature matrix from the outcome column.
"""
import logging
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple, TypeAlias, Union

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FloatMatrix: TypeAlias = np.ndarray  # shape [N, d], float64
FloatVector: TypeAlias = np.ndarray  # shape [N], float64
TargetSelector: TypeAlias = Union[str, int]

NORMALIZATION_MODES: Tuple[str, ...] = ("none", "zscore", "minmax")


# --- Errors ---

class DatasetError(ValueError):
    """Base class for every data loading failure."""


class DatasetNotFoundError(DatasetError, FileNotFoundError):
    """The CSV path does not exist."""


class CsvParseError(DatasetError):
    """A cell is empty or not a real number. Row/col are 1-based data coordinates."""

    def __init__(self, row: int, col: int, value: Any = None, column_name: str = ""):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(
            f"Cannot parse cell at data row {row}, column {col} ({column_name!r}) "
            f"as a real number: {value!r}"
        )


class TargetNotFoundError(DatasetError):
    """The target selector does not pick exactly one column."""


class EmptyDatasetError(DatasetError):
    """Fewer than two observations or no feature column."""


# --- Dataset ---

def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Immutable feature matrix plus outcome vector.

    The arrays are read-only, so one instance can be shared by every evaluation
    of a run (and by concurrent runs).
    """
    features: FloatMatrix
    outcome: FloatVector
    feature_names: Tuple[str, ...]
    outcome_name: str
    source_path: str = ""
    normalization: str = "none"
    transform_params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        features = _readonly(self.features)
        outcome = _readonly(self.outcome)
        if features.ndim != 2:
            raise DatasetError(f"features must be 2-D, got shape {features.shape}")
        if outcome.shape != (features.shape[0],):
            raise DatasetError(
                f"outcome length {outcome.shape} does not match {features.shape[0]} rows"
            )
        if features.shape[0] < 2:
            raise EmptyDatasetError(f"Need at least 2 observations, got {features.shape[0]}.")
        if features.shape[1] < 1:
            raise EmptyDatasetError("Need at least 1 feature column besides the outcome.")
        if len(self.feature_names) != features.shape[1]:
            raise DatasetError("feature_names length does not match the feature matrix")
        if not (np.all(np.isfinite(features)) and np.all(np.isfinite(outcome))):
            raise DatasetError("Dataset contains missing or non-finite values.")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "outcome", outcome)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_observations(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    def with_outcome(self, outcome: FloatVector) -> "Dataset":
        """Returns a copy with a replaced outcome vector (same features)."""
        return replace(self, outcome=np.asarray(outcome, dtype=np.float64))


# --- Loading ---

def _resolve_target(columns: Tuple[str, ...], target: TargetSelector) -> int:
    if isinstance(target, (int, np.integer)) and not isinstance(target, bool):
        index = int(target)
    else:
        text = str(target).strip()
        if text.lower() == "last":
            return len(columns) - 1
        matches = [i for i, name in enumerate(columns) if name == text]
        if len(matches) == 1:
            return matches[0]
        if len(matches) > 1:
            raise TargetNotFoundError(f"Target name {text!r} matches {len(matches)} columns.")
        try:
            index = int(text)
        except ValueError:
            raise TargetNotFoundError(
                f"Target column {text!r} not found. Available: {list(columns)}"
            ) from None
    if not 0 <= index < len(columns):
        raise TargetNotFoundError(
            f"Target index {index} out of range for {len(columns)} columns (0-based)."
        )
    return index


def _parse_numeric(frame: pd.DataFrame) -> np.ndarray:
    """Converts every cell to float, raising CsvParseError at the first bad cell."""
    values = np.empty(frame.shape, dtype=np.float64)
    for col_idx, name in enumerate(frame.columns):
        raw = frame[name]
        parsed = pd.to_numeric(raw.str.strip(), errors="coerce")
        bad = parsed.isna().to_numpy()
        if bad.any():
            row_idx = int(np.argmax(bad))
            raise CsvParseError(row_idx + 1, col_idx + 1, raw.iloc[row_idx], str(name))
        values[:, col_idx] = parsed.to_numpy(dtype=np.float64)
    bad_cells = ~np.isfinite(values)
    if bad_cells.any():
        row_idx, col_idx = (int(v) for v in np.argwhere(bad_cells)[0])
        raise CsvParseError(
            row_idx + 1, col_idx + 1, frame.iat[row_idx, col_idx], str(frame.columns[col_idx])
        )
    return values


def load_csv(
    path: str, target: TargetSelector = "last", normalization: str = "none"
) -> Dataset:
    """
    Loads a comma-separated UTF-8 file with a header row into a Dataset.

    Args:
        path (str): CSV file path.
        target (TargetSelector): Column name, 0-based index, or "last".
        normalization (str): One of "none", "zscore", "minmax"; applied to
            features only.

    Returns:
        Dataset: N rows, every non-target column as a feature.

    Raises:
        DatasetNotFoundError, CsvParseError, TargetNotFoundError, EmptyDatasetError.
    """
    logger.debug(f"Loading dataset from '{path}' (target={target}, normalization={normalization})")
    if not os.path.isfile(path):
        logger.error(f"Dataset file not found: {path}")
        raise DatasetNotFoundError(f"Dataset file not found: {path}")
    if normalization not in NORMALIZATION_MODES:
        raise DatasetError(f"Unknown normalization {normalization!r}; use one of {NORMALIZATION_MODES}")

    try:
        frame = pd.read_csv(
            path, sep=",", dtype=str, keep_default_na=False, encoding="utf-8-sig", skipinitialspace=True
        )
    except pd.errors.EmptyDataError as e:
        raise EmptyDatasetError(f"Dataset file is empty: {path}") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        logger.error(f"Could not read CSV '{path}': {e}")
        raise DatasetError(f"Could not read CSV '{path}': {e}") from e

    columns = tuple(str(c).strip() for c in frame.columns)
    frame.columns = list(columns)
    if len(columns) < 2:
        raise EmptyDatasetError(f"Need a feature column and an outcome column, found {len(columns)}.")
    if len(frame) < 2:
        raise EmptyDatasetError(f"Need at least 2 data rows, found {len(frame)}.")

    target_idx = _resolve_target(columns, target)
    values = _parse_numeric(frame)
    feature_idx = [i for i in range(len(columns)) if i != target_idx]

    dataset = Dataset(
        features=values[:, feature_idx],
        outcome=values[:, target_idx],
        feature_names=tuple(columns[i] for i in feature_idx),
        outcome_name=columns[target_idx],
        source_path=os.path.abspath(path),
    )
    logger.info(
        f"Loaded {dataset.n_observations} observations x {dataset.n_features} features "
        f"from '{path}' (outcome: '{dataset.outcome_name}')."
    )
    return normalize(dataset, normalization)


def write_csv(dataset: Dataset, path: str) -> None:
    """Writes features then outcome (last column) with the dataset's header names."""
    frame = pd.DataFrame(dataset.features, columns=list(dataset.feature_names))
    frame[dataset.outcome_name] = dataset.outcome
    frame.to_csv(path, index=False, float_format="%.17g", encoding="utf-8")
    logger.debug(f"Wrote dataset ({dataset.n_observations} rows) to {path}")


# --- Normalization ---

def normalize(dataset: Dataset, mode: str = "none") -> Dataset:
    """
    Returns a normalised copy of the dataset; the outcome is never touched.

    z-score uses the population standard deviation; constant columns map to
    zeros under both zscore and minmax.

    Args:
        dataset (Dataset): Input dataset.
        mode (str): "none", "zscore" or "minmax".

    Returns:
        Dataset: The same object for "none", otherwise a transformed copy with
        the per-column parameters recorded in transform_params.
    """
    if mode not in NORMALIZATION_MODES:
        raise DatasetError(f"Unknown normalization {mode!r}; use one of {NORMALIZATION_MODES}")
    if mode == "none":
        return dataset

    x = dataset.features
    if mode == "zscore":
        center = x.mean(axis=0)
        scale = x.std(axis=0)  # ddof=0
    else:
        center = x.min(axis=0)
        scale = x.max(axis=0) - center

    constant = scale == 0.0
    if constant.any():
        names = [dataset.feature_names[i] for i in np.flatnonzero(constant)]
        logger.warning(f"Constant feature columns mapped to 0 under {mode}: {names}")
    safe_scale = np.where(constant, 1.0, scale)
    transformed = np.where(constant, 0.0, (x - center) / safe_scale)

    params = {
        "center": center.tolist(),
        "scale": scale.tolist(),
        "constant_columns": [dataset.feature_names[i] for i in np.flatnonzero(constant)],
    }
    logger.debug(f"Applied {mode} normalization to {dataset.n_features} feature columns.")
    return replace(dataset, features=transformed, normalization=mode, transform_params=params)


def dataset_summary(dataset: Dataset) -> Dict[str, Any]:
    """Small JSON-ready description used in result files and the manifest."""
    return {
        "source_path": dataset.source_path,
        "n_observations": dataset.n_observations,
        "n_features": dataset.n_features,
        "feature_names": list(dataset.feature_names),
        "outcome_name": dataset.outcome_name,
        "normalization": dataset.normalization,
        "transform_params": dataset.transform_params,
    }


def outcome_sd(dataset: Dataset, ddof: int = 0) -> float:
    """Standard deviation of the outcome vector."""
    return float(np.std(dataset.outcome, ddof=ddof))


def make_two_blobs(
    n: int = 150,
    seed: int = 7,
    separation: float = 10.0,
    noise: float = 0.05,
    n_features: int = 2,
    rng: Optional[np.random.Generator] = None,
) -> Dataset:
    """
    Two well separated Gaussian blobs with an outcome that is linear inside each
    blob but with different coefficients per blob.

    Args:
        n (int): Total rows; the first blob gets ceil(n/2).
        seed (int): Seed used when rng is not given.
        separation (float): Distance of the blob means along every axis.
        noise (float): Standard deviation of the outcome noise.
        n_features (int): Feature dimension.
        rng (Optional[np.random.Generator]): Explicit random stream.

    Returns:
        Dataset: The synthetic dataset (source_path "synthetic:two_blobs").
    """
    rng = rng if rng is not None else np.random.default_rng(seed)
    n_first = (n + 1) // 2
    x_first = rng.normal(0.0, 1.0, size=(n_first, n_features))
    x_second = rng.normal(separation, 1.0, size=(n - n_first, n_features))
    w_first = np.linspace(1.0, 2.0, n_features)
    w_second = -np.linspace(3.0, 1.0, n_features)
    y_first = 1.0 + x_first @ w_first
    y_second = 50.0 + (x_second - separation) @ w_second
    features = np.vstack([x_first, x_second])
    outcome = np.concatenate([y_first, y_second]) + rng.normal(0.0, noise, size=n)
    return Dataset(
        features=features,
        outcome=outcome,
        feature_names=tuple(f"x{i + 1}" for i in range(n_features)),
        outcome_name="y",
        source_path="synthetic:two_blobs",
    )
