"""
Evaluation pipeline shared by every search path, with the optional
min-cluster-size guard.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ..data_utils.dataset import Dataset
from .genotype import Genotype, Partition, assign_nearest, decode, encode_star, partition_from_labels
from .objectives import REGRESSION_MODES, Centers, ObjectiveValues, compute_centers, evaluate_partition

logger = logging.getLogger(__name__)


class Evaluation(NamedTuple):
    genotype: Genotype
    partition: Partition
    objectives: ObjectiveValues
    centers: Centers


def representatives_nearest_centers(
    partition: Partition, centers: Centers, dataset: Dataset
) -> np.ndarray:
    """
    1-based representative per cluster: the member closest (L1) to the cluster's
    center, ties to the lowest observation index.
    """
    reps = np.empty(partition.k, dtype=np.int64)
    for c, members in enumerate(partition.members):
        distances = np.abs(dataset.features[members] - centers[c]).sum(axis=1)
        reps[c] = members[int(np.argmin(distances))] + 1
    return reps


def repair_small_clusters(
    partition: Partition, dataset: Dataset, min_cluster_size: int
) -> Partition:
    """
    Moves members of clusters smaller than `min_cluster_size` to the nearest
    median (L1) among the clusters that are large enough.

    When no cluster reaches the threshold, the largest cluster (lowest index on
    ties) absorbs everything else.

    Returns:
        Partition: The repaired partition, or the input when nothing is too small.
    """
    small = partition.sizes < min_cluster_size
    if not small.any():
        return partition
    keep = np.flatnonzero(~small)  # clusters that may receive members
    if keep.size == 0:
        keep = np.array([int(np.argmax(partition.sizes))])
    centers = compute_centers(partition, dataset)[keep]
    labels = partition.labels.copy()
    moving = np.isin(labels, keep, invert=True)
    # assign_nearest returns positions in `keep`; map back to cluster ids
    labels[moving] = keep[assign_nearest(dataset.features[moving], centers)]
    repaired = partition_from_labels(labels)
    logger.debug(
        f"Guard merged {int(small.sum())} clusters below size {min_cluster_size}: "
        f"K {partition.k} -> {repaired.k}"
    )
    return repaired


@dataclass(frozen=True, eq=False)
class Evaluator:
    """
    Decodes, optionally repairs, and scores chromosomes for one dataset and
    regression mode. Stateless apart from its configuration, so evaluations can
    run in any order.
    """
    dataset: Dataset
    regression_mode: str
    min_cluster_size: int = 0

    def __post_init__(self) -> None:
        if self.regression_mode not in REGRESSION_MODES:
            raise ValueError(
                f"Unknown regression mode {self.regression_mode!r}; use one of {REGRESSION_MODES}"
            )
        if self.min_cluster_size < 0:
            raise ValueError(f"min_cluster_size must be >= 0, got {self.min_cluster_size}")

    @property
    def guard_enabled(self) -> bool:
        return self.min_cluster_size > 1

    def evaluate(self, genotype: Genotype) -> Evaluation:
        """
        Scores a chromosome. With the guard enabled, partitions holding clusters
        smaller than the threshold are repaired first and the returned chromosome
        is the star re-encoding of the repaired partition.
        """
        genotype = np.asarray(genotype, dtype=np.int64)
        partition = decode(genotype)
        if self.guard_enabled:
            repaired = repair_small_clusters(partition, self.dataset, self.min_cluster_size)
            if repaired is not partition:
                # The stored chromosome must decode to the partition that was scored
                objectives, centers = evaluate_partition(repaired, self.dataset, self.regression_mode)
                reps = representatives_nearest_centers(repaired, centers, self.dataset)
                return Evaluation(encode_star(repaired, reps), repaired, objectives, centers)
        objectives, centers = evaluate_partition(partition, self.dataset, self.regression_mode)
        return Evaluation(genotype, partition, objectives, centers)

    def evaluate_partition(
        self, partition: Partition, anchors: Optional[Centers] = None
    ) -> Evaluation:
        """
        Scores an already decoded partition and star-encodes it.

        Representatives are the members nearest to `anchors` (one row per
        cluster) when given, otherwise nearest to the median centers. A guard
        repair discards the anchors.
        """
        if self.guard_enabled:
            repaired = repair_small_clusters(partition, self.dataset, self.min_cluster_size)
            if repaired is not partition:
                partition, anchors = repaired, None
        objectives, centers = evaluate_partition(partition, self.dataset, self.regression_mode)
        reps = representatives_nearest_centers(
            partition, centers if anchors is None else anchors, self.dataset
        )
        return Evaluation(encode_star(partition, reps), partition, objectives, centers)
