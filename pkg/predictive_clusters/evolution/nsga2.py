"""
NSGA-II machinery (dominance, non-dominated sorting, crowding distance,
crowded tournament, elitist environmental selection) and the crossover +
mutation generation update used by models 1-4.
"""
import logging
import time
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..clustering.evaluation import Evaluator
from ..clustering.genotype import Genotype, init_population, swap_mutation, uniform_crossover
from ..clustering.objectives import ObjectiveValues
from ..data_utils.dataset import Dataset
from .run_types import (
    EvolutionConfig,
    Individual,
    ModelSpec,
    RunResult,
    objective_matrix,
    summarize_generation,
)

logger = logging.getLogger(__name__)

Front = List[int]
Selector = Callable[[List[Individual], np.random.Generator], int]


# --- Pareto machinery ---

def dominates(a: ObjectiveValues, b: ObjectiveValues) -> bool:
    """True iff a is no worse than b in both objectives and strictly better in one."""
    a_dev, a_mae = a.as_tuple()
    b_dev, b_mae = b.as_tuple()
    return a_dev <= b_dev and a_mae <= b_mae and (a_dev < b_dev or a_mae < b_mae)


def nondominated_fronts(values: np.ndarray) -> List[Front]:
    """
    Peels successive non-dominated layers off a [P, M] objective matrix.

    Returns:
        List[Front]: Index lists per front, each sorted ascending.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    if n == 0:
        return []
    no_worse = np.all(values[:, None, :] <= values[None, :, :], axis=2)
    better = np.any(values[:, None, :] < values[None, :, :], axis=2)
    dominance = no_worse & better  # dominance[i, j]: i dominates j
    dominated_by = dominance.sum(axis=0)  # domination count per individual
    remaining = np.ones(n, dtype=bool)
    fronts: List[Front] = []
    while remaining.any():
        current = remaining & (dominated_by == 0)  # nobody left dominates these
        front = np.flatnonzero(current)
        fronts.append(front.tolist())
        # Removing the front releases everything it dominated
        dominated_by = dominated_by - dominance[front].sum(axis=0)
        remaining &= ~current
    return fronts


def fast_nondominated_sort(pop: Sequence[Individual]) -> List[Front]:
    """
    Sorts a population into fronts and writes the 1-based rank of every
    individual back onto it.

    Args:
        pop (Sequence[Individual]): Evaluated individuals.

    Returns:
        List[Front]: Population indices per front, best front first.
    """
    fronts = nondominated_fronts(objective_matrix(list(pop)))
    for rank, front in enumerate(fronts, start=1):
        for i in front:
            pop[i].rank = rank
    return fronts


def crowding_distance(front: Front, pop: Sequence[Individual]) -> None:
    """
    Writes the range-normalised crowding distance of every front member.

    Boundary members of each objective get +inf; an objective with zero range
    adds nothing to interior members. Sorting is stable, so equal values keep
    index order.
    """
    if not front:
        return
    if len(front) <= 2:
        for i in front:
            pop[i].crowding = float("inf")
        return
    values = objective_matrix([pop[i] for i in front])
    distance = np.zeros(len(front), dtype=np.float64)
    for m in range(values.shape[1]):
        order = np.argsort(values[:, m], kind="stable")
        column = values[order, m]
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        span = column[-1] - column[0]
        # Interior members: normalised gap between the two neighbours
        if span > 0:
            distance[order[1:-1]] += (column[2:] - column[:-2]) / span
    for i, d in zip(front, distance):
        pop[i].crowding = float(d)


def assign_crowding(pop: Sequence[Individual], fronts: Sequence[Front]) -> None:
    for front in fronts:
        crowding_distance(front, pop)


def rank_population(pop: Sequence[Individual]) -> List[Front]:
    """Recomputes rank and crowding of every individual in place."""
    fronts = fast_nondominated_sort(pop)
    assign_crowding(pop, fronts)
    return fronts


# --- Selection ---

def crowded_better(pop: Sequence[Individual], i: int, j: int) -> int:
    """Index of the winner under the crowded-comparison operator (ties: lower index)."""
    a, b = pop[i], pop[j]
    if a.rank != b.rank:
        return i if a.rank < b.rank else j
    if a.crowding != b.crowding:
        return i if a.crowding > b.crowding else j
    return min(i, j)


def tournament_index(pop: List[Individual], rng: np.random.Generator) -> int:
    i, j = (int(v) for v in rng.integers(0, len(pop), size=2))
    return crowded_better(pop, i, j)


def binary_tournament(pop: List[Individual], rng: np.random.Generator) -> Individual:
    """Two contestants drawn uniformly with replacement; crowded comparison decides."""
    return pop[tournament_index(pop, rng)]


def offspring_counts(population_size: int, crossover_pct: float, mutation_pct: float) -> Tuple[int, int]:
    """
    Number of crossover children (always even, at least one pair when the
    percentage is positive) and of mutants (at least one).
    """
    n_children = 0
    if crossover_pct > 0:
        # pairs = floor(pct * P / 200), two children per pair
        n_children = max(2, 2 * int(np.floor(crossover_pct * population_size / 200.0)))
    n_mutants = max(1, int(np.floor(mutation_pct * population_size / 100.0 + 0.5)))  # round half up
    return n_children, n_mutants


def make_offspring(
    pop: List[Individual],
    config: EvolutionConfig,
    rng: np.random.Generator,
    select: Selector = tournament_index,
) -> List[Individual]:
    """
    Builds the unevaluated offspring: crossover children from selected parent
    pairs, then mutants as swap-mutated copies of selected parents.

    Args:
        pop (List[Individual]): Current (ranked) population.
        config (EvolutionConfig): Supplies the percentages.
        rng (np.random.Generator): Random stream.
        select (Selector): Parent selection returning a population index.

    Returns:
        List[Individual]: Offspring with objectives=None.
    """
    n_children, n_mutants = offspring_counts(len(pop), config.crossover_pct, config.mutation_pct)
    genotypes: List[Genotype] = []
    for _ in range(n_children // 2):
        p1 = pop[select(pop, rng)].genotype
        p2 = pop[select(pop, rng)].genotype
        genotypes.extend(uniform_crossover(p1, p2, rng))
    for _ in range(n_mutants):
        genotypes.append(swap_mutation(pop[select(pop, rng)].genotype, rng))
    return [Individual(genotype=g) for g in genotypes]


def evaluate_all(individuals: List[Individual], evaluator: Evaluator) -> List[Individual]:
    """Evaluates in index order and returns fresh, unranked individuals."""
    return [Individual.from_evaluation(evaluator.evaluate(ind.genotype)) for ind in individuals]


def environmental_selection(combined: List[Individual], size: int) -> List[Individual]:
    """
    Elitist survivor selection over parents and offspring.

    Whole fronts are admitted in rank order; the first front that does not fit
    is cut by descending crowding distance, ties going to the lower index.
    Rank and crowding are recomputed on the combined set.

    Returns:
        List[Individual]: Exactly `size` survivors, in their combined order.
    """
    if len(combined) < size:
        raise ValueError(f"Cannot select {size} survivors from {len(combined)} candidates")
    fronts = rank_population(combined)
    selected: List[int] = []
    for front in fronts:
        room = size - len(selected)
        if room == 0:
            break
        if len(front) <= room:
            selected.extend(front)
            continue
        ordered = sorted(front, key=lambda i: (-combined[i].crowding, i))
        selected.extend(ordered[:room])
    return [combined[i] for i in sorted(selected)]


# --- Run loop ---

def initial_population(
    dataset: Dataset, config: EvolutionConfig, evaluator: Evaluator, rng: np.random.Generator
) -> List[Individual]:
    genotypes = init_population(dataset, config.init_method, config.population_size, rng)
    pop = [Individual.from_evaluation(evaluator.evaluate(g)) for g in genotypes]
    rank_population(pop)
    return pop


def run_nsga2(
    dataset: Dataset,
    config: EvolutionConfig,
    rng: Optional[np.random.Generator] = None,
    model: Optional[ModelSpec] = None,
) -> RunResult:
    """
    Runs NSGA-II with crossover and mutation for `config.iterations` generations.

    Args:
        dataset (Dataset): Data to cluster.
        config (EvolutionConfig): Search settings.
        rng (Optional[np.random.Generator]): Random stream; seeded from
            config.seed when omitted.
        model (Optional[ModelSpec]): Model recorded in the result.

    Returns:
        RunResult: Statistics for generations 0..iterations and the final
        ranked population.
    """
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    evaluator = Evaluator(dataset, config.regression_mode, config.min_cluster_size)
    started = time.perf_counter()
    logger.info(
        f"NSGA-II start: {config.init_method}/{config.regression_mode}, "
        f"P={config.population_size}, iterations={config.iterations}, seed={config.seed}"
    )

    pop = initial_population(dataset, config, evaluator, rng)
    history = [summarize_generation(pop, 0)]
    for generation in range(1, config.iterations + 1):
        offspring = evaluate_all(make_offspring(pop, config, rng), evaluator)
        pop = environmental_selection(pop + offspring, config.population_size)
        rank_population(pop)
        history.append(summarize_generation(pop, generation))
        logger.debug(
            f"Generation {generation}: min deviation {history[-1].min_deviation:.6g}, "
            f"min MAE {history[-1].min_mae:.6g}, front 1 size {history[-1].front1_size}"
        )

    elapsed = time.perf_counter() - started
    logger.info(f"NSGA-II done in {elapsed:.2f}s; final front 1 size {history[-1].front1_size}.")
    return RunResult(
        model=model,
        algorithm="NSGA-II",
        seed=config.seed,
        config=config,
        generations=history,
        population=pop,
        wall_time=elapsed,
    )
