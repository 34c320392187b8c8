"""
SGD k-medians generation update (models 5-8). Non-dominated solutions are kept
as they are; every dominated solution gets one stochastic step per cluster,
moving each center toward a randomly drawn member, followed by an L1
reassignment and star re-encoding.
"""
import logging
import time
from typing import List, Optional

import numpy as np

from ..clustering.evaluation import Evaluator
from ..clustering.genotype import assign_nearest, decode, partition_from_labels
from ..clustering.objectives import compute_centers
from ..data_utils.dataset import Dataset
from .nsga2 import initial_population, rank_population
from .run_types import EvolutionConfig, Individual, ModelSpec, RunResult, SgdParams, summarize_generation

logger = logging.getLogger(__name__)

STEP_EPSILON = 1e-12


def learning_rate(n_r: int, params: SgdParams = SgdParams()) -> float:
    """Step size c_gamma / (1 + c_alpha * n_r) ** alpha for a cluster of n_r members."""
    if n_r < 0:
        raise ValueError(f"Cluster size must be >= 0, got {n_r}")
    return params.c_gamma / (1.0 + params.c_alpha * n_r) ** params.alpha


def sgd_center_step(center: np.ndarray, z: np.ndarray, a: float) -> np.ndarray:
    """
    Moves `center` a Euclidean distance `a` toward `z`.

    Returns:
        np.ndarray: The new center; unchanged when center and z coincide
        (distance below 1e-12).
    """
    center = np.asarray(center, dtype=np.float64)
    direction = center - np.asarray(z, dtype=np.float64)
    norm = float(np.linalg.norm(direction))
    if norm < STEP_EPSILON:
        return center.copy()
    return center - a * direction / norm


def improve_solution(
    ind: Individual,
    dataset: Dataset,
    params: SgdParams,
    rng: np.random.Generator,
    regression_mode: str = "LR",
    evaluator: Optional[Evaluator] = None,
) -> Individual:
    """
    Applies one SGD sweep to a dominated individual.

    Clusters are visited in random order; each center steps toward one member
    drawn uniformly from its cluster. Observations are then reassigned to the
    nearest updated center (L1, ties to the lowest cluster index), empty
    clusters vanish, and the partition is star-encoded around the members
    closest to the updated centers.

    Args:
        ind (Individual): Evaluated individual.
        dataset (Dataset): Data being clustered.
        params (SgdParams): Learning-rate constants.
        rng (np.random.Generator): Random stream.
        regression_mode (str): "LR" or "CP"; ignored when evaluator is given.
        evaluator (Optional[Evaluator]): Shared evaluation pipeline.

    Returns:
        Individual: A new, unranked individual, or `ind` itself when it has a
        single cluster or the reassignment collapses to one.
    """
    evaluator = evaluator if evaluator is not None else Evaluator(dataset, regression_mode)
    partition = decode(ind.genotype)
    if partition.k == 1:
        return ind

    x = dataset.features
    centers = compute_centers(partition, dataset)
    # Random visiting order; the step size depends on the cluster's size
    # before the sweep, not on any reassignment made during it.
    for r in rng.permutation(partition.k):
        members = partition.members[r]
        z = x[members[int(rng.integers(0, members.size))]]
        centers[r] = sgd_center_step(centers[r], z, learning_rate(members.size, params))

    labels = assign_nearest(x, centers)  # old center index per observation
    updated = partition_from_labels(labels)  # renumbered; centers nobody chose drop out
    if updated.k == 1:
        logger.debug("SGD reassignment collapsed to a single cluster; keeping the solution.")
        return ind
    # Anchor each new cluster on the moved center it was assigned to, not on its
    # median: the representative is then the member closest to that center.
    # Canonical cluster c came from old center labels[first member of c].
    anchors = centers[[labels[members[0]] for members in updated.members]]
    return Individual.from_evaluation(evaluator.evaluate_partition(updated, anchors))


def run_sgd_evolution(
    dataset: Dataset,
    config: EvolutionConfig,
    params: SgdParams = SgdParams(),
    rng: Optional[np.random.Generator] = None,
    model: Optional[ModelSpec] = None,
) -> RunResult:
    """
    Runs the SGD-updated search: each generation keeps front 1 and replaces every
    dominated individual by its improved version. Crossover and mutation
    settings are ignored.

    Returns:
        RunResult: Same layout as run_nsga2, with sgd_params recorded.
    """
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    evaluator = Evaluator(dataset, config.regression_mode, config.min_cluster_size)
    started = time.perf_counter()
    logger.info(
        f"SGD search start: {config.init_method}/{config.regression_mode}, "
        f"P={config.population_size}, iterations={config.iterations}, seed={config.seed}, "
        f"c_gamma={params.c_gamma}, c_alpha={params.c_alpha}, alpha={params.alpha}"
    )

    pop = initial_population(dataset, config, evaluator, rng)
    history = [summarize_generation(pop, 0)]
    for generation in range(1, config.iterations + 1):
        next_pop: List[Individual] = []
        for ind in pop:
            if ind.rank == 1:
                next_pop.append(ind)
            else:
                next_pop.append(improve_solution(ind, dataset, params, rng, evaluator=evaluator))
        pop = next_pop
        rank_population(pop)
        history.append(summarize_generation(pop, generation))
        logger.debug(
            f"Generation {generation}: mean deviation {history[-1].mean_deviation:.6g}, "
            f"mean MAE {history[-1].mean_mae:.6g}, front 1 size {history[-1].front1_size}"
        )

    elapsed = time.perf_counter() - started
    logger.info(f"SGD search done in {elapsed:.2f}s; final front 1 size {history[-1].front1_size}.")
    return RunResult(
        model=model,
        algorithm="SGD",
        seed=config.seed,
        config=config,
        generations=history,
        population=pop,
        sgd_params=params,
        wall_time=elapsed,
    )
