"""
The two minimised objectives of a clustering: k-medians deviation (sum of L1
distances to componentwise-median centers) and the macro-averaged mean
absolute error of an outcome regression, fitted either per cluster (LR) or on
the cluster label itself (CP).
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, TypeAlias

import numpy as np
import scipy.linalg

from ..data_utils.dataset import Dataset
from .genotype import Partition, decode

logger = logging.getLogger(__name__)

Centers: TypeAlias = np.ndarray  # shape [K, d]

REGRESSION_MODES: Tuple[str, ...] = ("LR", "CP")
RIDGE_LAMBDA = 1e-8


class NonFiniteInputError(ValueError):
    """Least-squares input contains NaN or infinity."""


@dataclass(frozen=True)
class ObjectiveValues:
    """Both objectives, each minimised."""
    deviation: float
    mae: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.deviation) and np.isfinite(self.mae)):
            raise NonFiniteInputError(f"Objectives must be finite: {self}")
        if self.deviation < 0 or self.mae < 0:
            raise ValueError(f"Objectives must be non-negative: {self}")

    def as_tuple(self) -> Tuple[float, float]:
        return (self.deviation, self.mae)


@dataclass(frozen=True, eq=False)
class ClusterRegression:
    """
    Fitted outcome model.

    LR: one coefficient vector (B_0..B_d) per cluster. Clusters with no more
    members than coefficients are interpolated (prediction = own outcome) and
    flagged in `interpolated`; their reported coefficients are (mean y, 0, ..., 0).
    CP: a single (B_0, B_1) pair shared by every observation.
    """
    mode: str
    coefficients: Tuple[np.ndarray, ...]
    predictions: np.ndarray
    interpolated: Tuple[bool, ...] = ()


# --- Centers and deviation ---

def compute_centers(partition: Partition, dataset: Dataset) -> Centers:
    """
    Componentwise median of every cluster (even sizes use the midpoint of the
    middle pair, numpy's convention).
    """
    x = dataset.features
    centers = np.empty((partition.k, x.shape[1]), dtype=np.float64)
    for c, members in enumerate(partition.members):
        centers[c] = np.median(x[members], axis=0)
    return centers


def deviation(partition: Partition, centers: Centers, dataset: Dataset) -> float:
    """Sum over clusters and members of the L1 distance to the cluster center."""
    return float(np.abs(dataset.features - centers[partition.labels]).sum())


# --- Least squares ---

def solve_least_squares(design: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """
    Minimises ||design @ b - targets||_2.

    Full-column-rank systems are solved by numpy's SVD-based lstsq. Rank-deficient
    ones fall back to ridge-regularised normal equations with
    lambda = 1e-8 * mean(diag(X^T X)), every coefficient penalised.

    Args:
        design (np.ndarray): [m, q] design matrix, m >= 1, q >= 1.
        targets (np.ndarray): [m] target vector.

    Returns:
        np.ndarray: [q] coefficient vector.

    Raises:
        NonFiniteInputError: If an input value is NaN or infinite.
    """
    design = np.atleast_2d(np.asarray(design, dtype=np.float64))
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if design.shape[0] != targets.shape[0] or design.size == 0:
        raise ValueError(f"Incompatible shapes {design.shape} and {targets.shape}")
    if not (np.all(np.isfinite(design)) and np.all(np.isfinite(targets))):
        raise NonFiniteInputError("Least-squares input contains NaN or infinity")

    q = design.shape[1]
    if np.linalg.matrix_rank(design) == q:
        coefficients, *_ = np.linalg.lstsq(design, targets, rcond=None)
        return coefficients

    # Rank-deficient: duplicated or constant feature columns inside a cluster
    # (common in small clusters). Solve (X^T X + lambda I) b = X^T y instead.
    gram = design.T @ design
    # Scale lambda to the data so the penalty is equally tiny for raw and
    # normalised features. An all-zero design (scale 0) gets lambda = 1e-8.
    scale = float(np.mean(np.diag(gram)))
    lam = RIDGE_LAMBDA * (scale if scale > 0 else 1.0)
    logger.debug(f"Rank-deficient design {design.shape}; ridge fallback with lambda={lam:.3g}")
    # gram + lam*I is symmetric positive definite, so Cholesky (assume_a="pos") applies.
    return scipy.linalg.solve(gram + lam * np.eye(q), design.T @ targets, assume_a="pos")


# --- Regression modes ---

def fit_lr(partition: Partition, dataset: Dataset) -> ClusterRegression:
    """
    Ordinary least squares of the outcome on all features plus intercept,
    fitted separately on every cluster's members and scored in-sample.
    """
    x, y = dataset.features, dataset.outcome
    q = x.shape[1] + 1
    predictions = np.empty_like(y)
    coefficients: List[np.ndarray] = []
    interpolated: List[bool] = []
    for members in partition.members:
        y_c = y[members]
        # No more points than coefficients: the fit passes through every point,
        # so predict each member's own outcome (residual 0) without solving.
        if members.size <= q:
            predictions[members] = y_c
            coef = np.zeros(q)
            coef[0] = y_c.mean()
            coefficients.append(coef)
            interpolated.append(True)
            continue
        design = np.column_stack([np.ones(members.size), x[members]])
        coef = solve_least_squares(design, y_c)
        predictions[members] = design @ coef
        coefficients.append(coef)
        interpolated.append(False)
    return ClusterRegression("LR", tuple(coefficients), predictions, tuple(interpolated))


def fit_cp(partition: Partition, dataset: Dataset) -> ClusterRegression:
    """
    Simple regression of the outcome on the numeric cluster label (1..K in
    canonical order) over all observations. A constant label gives B_1 = 0 and
    B_0 = mean(y).
    """
    y = dataset.outcome
    label_values = partition.labels.astype(np.float64) + 1.0  # 1-based labels as the regressor
    centered = label_values - label_values.mean()
    variance = float(centered @ centered)
    if partition.k == 1 or variance == 0.0:
        b0, b1 = float(y.mean()), 0.0
    else:
        b1 = float(centered @ (y - y.mean())) / variance
        b0 = float(y.mean() - b1 * label_values.mean())
    predictions = b0 + b1 * label_values
    return ClusterRegression("CP", (np.array([b0, b1]),), predictions)


def fit_regression(partition: Partition, dataset: Dataset, regression_mode: str) -> ClusterRegression:
    if regression_mode == "LR":
        return fit_lr(partition, dataset)
    if regression_mode == "CP":
        return fit_cp(partition, dataset)
    raise ValueError(f"Unknown regression mode {regression_mode!r}; use one of {REGRESSION_MODES}")


def mae(partition: Partition, predictions: Sequence[float], dataset: Dataset) -> float:
    """
    Macro-averaged MAE: the mean over clusters of each cluster's mean absolute
    residual (not the pooled mean over all observations).
    """
    residuals = np.abs(dataset.outcome - np.asarray(predictions, dtype=np.float64))
    # Residual sum per cluster, then divide by cluster size: small clusters weigh
    # as much as large ones in the final mean.
    per_cluster = np.bincount(partition.labels, weights=residuals, minlength=partition.k)
    return float(np.mean(per_cluster / partition.sizes))


# --- Full evaluation ---

def evaluate_partition(
    partition: Partition, dataset: Dataset, regression_mode: str
) -> Tuple[ObjectiveValues, Centers]:
    """Objectives of a decoded partition, plus the median centers used for deviation."""
    centers = compute_centers(partition, dataset)
    regression = fit_regression(partition, dataset, regression_mode)
    values = ObjectiveValues(
        deviation=deviation(partition, centers, dataset),
        mae=mae(partition, regression.predictions, dataset),
    )
    return values, centers


def evaluate(g: Sequence[int], dataset: Dataset, regression_mode: str) -> ObjectiveValues:
    """
    Decodes a chromosome and computes (deviation, MAE). Deterministic.

    Args:
        g (Sequence[int]): Chromosome of length N.
        dataset (Dataset): Data to evaluate on.
        regression_mode (str): "LR" or "CP".

    Returns:
        ObjectiveValues: The objective pair.
    """
    if len(g) != dataset.n_observations:
        raise ValueError(f"Genotype length {len(g)} != N={dataset.n_observations}")
    values, _ = evaluate_partition(decode(g), dataset, regression_mode)
    return values
