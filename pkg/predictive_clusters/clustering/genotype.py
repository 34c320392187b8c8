"""
Locus-based adjacency chromosomes: allele g_i = j links observations i and j
(both 1-based) and clusters are the connected components of those links.

Covers decoding to partitions, star-shaped encoding, RSO / RC initialisation,
uniform crossover and swap mutation. Every random choice is drawn from an
explicit numpy Generator passed in by the caller.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, TypeAlias

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..data_utils.dataset import Dataset

logger = logging.getLogger(__name__)

Genotype: TypeAlias = np.ndarray  # shape [N], int64, alleles in 1..N
LabelVector: TypeAlias = np.ndarray  # shape [N], int64, cluster ids in 0..K-1

INIT_METHODS: Tuple[str, ...] = ("RSO", "RC")
RSO_MIN_K = 2
RSO_MAX_K = 10


# --- Errors ---

class GenotypeError(ValueError):
    """Base class for chromosome errors."""


class KOutOfRangeError(GenotypeError):
    """Requested number of clusters is outside 2..N."""


class LengthMismatchError(GenotypeError):
    """Two chromosomes (or a chromosome and a dataset) differ in length."""


class RepresentativeOutsideClusterError(GenotypeError):
    """A star representative is not a member of the cluster it stands for."""


# --- Partition ---

@dataclass(frozen=True, eq=False)
class Partition:
    """
    Cluster label per observation, canonically numbered: cluster 0 holds
    observation 0, and clusters are ordered by their smallest member.
    """
    labels: LabelVector
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=np.int64))

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    @cached_property
    def members(self) -> Tuple[np.ndarray, ...]:
        """Sorted 0-based observation indices of every cluster."""
        order = np.argsort(self.labels, kind="stable")
        return tuple(np.split(order, np.cumsum(self.sizes)[:-1]))

    @property
    def n_observations(self) -> int:
        return int(self.labels.shape[0])

    def same_membership(self, other: "Partition") -> bool:
        return self.k == other.k and bool(np.array_equal(self.labels, other.labels))


def partition_from_labels(labels: Sequence[int]) -> Partition:
    """
    Builds a canonical Partition from arbitrary (not necessarily contiguous) labels.

    Args:
        labels (Sequence[int]): Any integer label per observation.

    Returns:
        Partition: Clusters renumbered by smallest member, ascending.
    """
    labels = np.asarray(labels)
    unique, first_index, inverse = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(first_index, kind="stable")
    mapping = np.empty(len(unique), dtype=np.int64)
    mapping[order] = np.arange(len(unique), dtype=np.int64)
    canonical = mapping[inverse.reshape(-1)]
    canonical.flags.writeable = False
    return Partition(labels=canonical, k=int(len(unique)))


# --- Encoding / decoding ---

def validate_genotype(g: Sequence[int], n: Optional[int] = None) -> Genotype:
    """
    Checks the chromosome invariants and returns it as an int64 array.

    Raises:
        LengthMismatchError: If n is given and differs from len(g).
        GenotypeError: If an allele lies outside 1..N.
    """
    alleles = np.asarray(g, dtype=np.int64)
    if alleles.ndim != 1 or alleles.size == 0:
        raise GenotypeError(f"Genotype must be a non-empty 1-D sequence, got shape {alleles.shape}")
    if n is not None and alleles.size != n:
        raise LengthMismatchError(f"Genotype length {alleles.size} does not match N={n}")
    if alleles.min() < 1 or alleles.max() > alleles.size:
        raise GenotypeError(f"Alleles must lie in 1..{alleles.size}")
    return alleles


def decode(g: Sequence[int]) -> Partition:
    """
    Decodes a chromosome into the connected components of the link graph.

    Args:
        g (Sequence[int]): Alleles in 1..N.

    Returns:
        Partition: Canonically labelled components of edges {i, g_i}.
    """
    alleles = validate_genotype(g)
    n = alleles.size
    rows = np.arange(n)
    # One undirected edge per gene: i -- g_i (self-links add nothing)
    graph = coo_matrix((np.ones(n, dtype=np.int8), (rows, alleles - 1)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return partition_from_labels(labels)


def encode_star(partition: Partition, representatives: Sequence[int]) -> Genotype:
    """
    Encodes a partition as star-shaped link trees.

    Args:
        partition (Partition): Target partition.
        representatives (Sequence[int]): 1-based observation number per cluster,
            in canonical cluster order.

    Returns:
        Genotype: Representatives link to themselves, every other member links
        to its cluster's representative.

    Raises:
        RepresentativeOutsideClusterError: If a representative is not in its cluster.
    """
    reps = np.asarray(representatives, dtype=np.int64)
    if reps.shape != (partition.k,):
        raise RepresentativeOutsideClusterError(
            f"Expected {partition.k} representatives, got {reps.size}"
        )
    if reps.min() < 1 or reps.max() > partition.n_observations:
        raise RepresentativeOutsideClusterError("Representative index outside 1..N")
    owning = partition.labels[reps - 1]  # cluster each representative belongs to
    wrong = np.flatnonzero(owning != np.arange(partition.k))
    if wrong.size:
        c = int(wrong[0])
        raise RepresentativeOutsideClusterError(
            f"Representative {int(reps[c])} is not a member of cluster {c}"
        )
    # Every gene points at its own cluster's representative (a star per cluster)
    return reps[partition.labels].astype(np.int64)


def assign_nearest(features: np.ndarray, centers: np.ndarray) -> LabelVector:
    """
    Assigns every row to its nearest center by L1 distance.

    Ties go to the lowest center index (np.argmin returns the first minimum).

    Args:
        features (np.ndarray): [N, d] observations.
        centers (np.ndarray): [K, d] centers.

    Returns:
        LabelVector: Center index per observation.
    """
    distances = np.empty((features.shape[0], centers.shape[0]), dtype=np.float64)
    # [N, K] L1 distances, filled one center at a time
    for j, center in enumerate(centers):
        distances[:, j] = np.abs(features - center).sum(axis=1)
    return np.argmin(distances, axis=1).astype(np.int64)


# --- Initialisation ---

def init_rso(
    dataset: Dataset,
    k: int,
    rng: np.random.Generator,
    centers: Optional[Sequence[int]] = None,
) -> Genotype:
    """
    Random-selected-observations initialisation.

    k distinct observations become centers; every other observation joins the
    nearest center (L1, ties to the lowest center observation index). The result
    is star-encoded around the centers and decodes to exactly k clusters.

    Args:
        dataset (Dataset): Source of the feature vectors.
        k (int): Number of clusters, 2..N.
        rng (np.random.Generator): Random stream.
        centers (Optional[Sequence[int]]): Fixed 1-based center observations;
            sampled from rng when omitted.

    Returns:
        Genotype: The star-encoded chromosome.

    Raises:
        KOutOfRangeError: If k is outside 2..N.
    """
    n = dataset.n_observations
    if not RSO_MIN_K <= k <= n:
        raise KOutOfRangeError(f"k={k} outside {RSO_MIN_K}..{n}")
    if centers is None:
        center_idx = np.sort(rng.choice(n, size=k, replace=False))
    else:
        center_idx = np.sort(np.asarray(centers, dtype=np.int64) - 1)
        if center_idx.size != k or np.unique(center_idx).size != k:
            raise KOutOfRangeError(f"Expected {k} distinct centers, got {list(centers)}")

    labels = assign_nearest(dataset.features, dataset.features[center_idx])
    # Duplicated points could otherwise pull a center into another cluster.
    labels[center_idx] = np.arange(k)
    partition = partition_from_labels(labels)
    reps = np.empty(k, dtype=np.int64)
    reps[partition.labels[center_idx]] = center_idx + 1
    return encode_star(partition, reps)


def init_rc(n: int, rng: np.random.Generator) -> Genotype:
    """Random chromosome: n independent alleles, uniform on 1..n."""
    if n < 2:
        raise GenotypeError(f"Random chromosomes need n >= 2, got {n}")
    return np.asarray(rng.integers(1, n + 1, size=n), dtype=np.int64)


def rso_k_schedule(size: int, n: int) -> List[int]:
    """k per population member: cycles 2, 3, ..., min(10, n) and repeats."""
    k_max = min(RSO_MAX_K, n)
    if k_max < RSO_MIN_K:
        raise KOutOfRangeError(f"RSO needs at least {RSO_MIN_K} observations, got {n}")
    span = k_max - RSO_MIN_K + 1
    return [RSO_MIN_K + (m % span) for m in range(size)]


def init_population(
    dataset: Dataset, method: str, size: int, rng: np.random.Generator
) -> List[Genotype]:
    """
    Creates the initial population with RSO (cycling k) or RC chromosomes.

    Args:
        dataset (Dataset): Dataset to cluster.
        method (str): "RSO" or "RC".
        size (int): Population size (>= 1).
        rng (np.random.Generator): Random stream.

    Returns:
        List[Genotype]: `size` chromosomes of length N.
    """
    if size < 1:
        raise GenotypeError(f"Population size must be >= 1, got {size}")
    if method == "RSO":
        schedule = rso_k_schedule(size, dataset.n_observations)
        if dataset.n_observations < RSO_MAX_K:
            logger.warning(
                f"Only {dataset.n_observations} observations; RSO k capped at {max(schedule)}."
            )
        population = [init_rso(dataset, k, rng) for k in schedule]
    elif method == "RC":
        population = [init_rc(dataset.n_observations, rng) for _ in range(size)]
    else:
        raise GenotypeError(f"Unknown initialisation method {method!r}; use one of {INIT_METHODS}")
    logger.debug(f"Initialised {size} chromosomes with {method}.")
    return population


# --- Genetic operators ---

def uniform_crossover(
    p1: Genotype,
    p2: Genotype,
    rng: np.random.Generator,
    mask: Optional[Sequence[int]] = None,
) -> Tuple[Genotype, Genotype]:
    """
    Uniform crossover with a 0/1 mask: child 1 takes p1 where the mask is 0 and
    p2 where it is 1; child 2 uses the complemented mask.

    Raises:
        LengthMismatchError: If the parents differ in length.
    """
    p1 = np.asarray(p1, dtype=np.int64)
    p2 = np.asarray(p2, dtype=np.int64)
    if p1.shape != p2.shape:
        raise LengthMismatchError(f"Parent lengths differ: {p1.size} vs {p2.size}")
    if mask is None:
        mask = rng.integers(0, 2, size=p1.size)  # fair coin per locus
    take_first = np.asarray(mask) == 0
    if take_first.shape != p1.shape:
        raise LengthMismatchError(f"Mask length {take_first.size} != genotype length {p1.size}")
    return np.where(take_first, p1, p2), np.where(take_first, p2, p1)


def swap_mutation(
    g: Genotype,
    rng: np.random.Generator,
    loci: Optional[Tuple[int, int]] = None,
) -> Genotype:
    """
    Exchanges the alleles of two distinct loci (1-based when given explicitly).

    Returns:
        Genotype: A mutated copy; the input is left untouched.
    """
    mutant = np.array(g, dtype=np.int64, copy=True)
    if mutant.size < 2:
        raise GenotypeError("Swap mutation needs at least two genes")
    if loci is None:
        i, j = (int(v) for v in rng.choice(mutant.size, size=2, replace=False))
    else:
        i, j = loci[0] - 1, loci[1] - 1
        if i == j:
            raise GenotypeError(f"Swap loci must differ, got {loci}")
    mutant[i], mutant[j] = mutant[j], mutant[i]
    return mutant
