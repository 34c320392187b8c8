"""
Single-objective GA on deviation alone. Shares initialisation and variation
operators with the NSGA-II path; MAE is computed for reporting only.
"""
import logging
import time
from typing import List, Optional

import numpy as np

from ..clustering.evaluation import Evaluator
from ..data_utils.dataset import Dataset
from .nsga2 import evaluate_all, initial_population, make_offspring, rank_population
from .run_types import EvolutionConfig, Individual, ModelSpec, RunResult, summarize_generation

logger = logging.getLogger(__name__)


def deviation_tournament(pop: List[Individual], rng: np.random.Generator) -> int:
    """Binary tournament on deviation; ties go to the lower index."""
    i, j = (int(v) for v in rng.integers(0, len(pop), size=2))
    di, dj = pop[i].objectives.deviation, pop[j].objectives.deviation
    if di != dj:
        return i if di < dj else j
    return min(i, j)


def truncate_by_deviation(combined: List[Individual], size: int) -> List[Individual]:
    """(mu + lambda) truncation: the `size` lowest deviations, ties to the lower index."""
    order = sorted(range(len(combined)), key=lambda i: (combined[i].objectives.deviation, i))
    return [combined[i] for i in order[:size]]


def run_soga(
    dataset: Dataset,
    config: EvolutionConfig,
    rng: Optional[np.random.Generator] = None,
    model: Optional[ModelSpec] = None,
) -> RunResult:
    """
    Runs the deviation-only GA.

    Ranks and crowding distances are still computed every generation so the
    result has the same columns as a multi-objective run, but no selection step
    reads them.

    Args:
        dataset (Dataset): Data to cluster.
        config (EvolutionConfig): Same settings as the paired NSGA-II run;
            regression_mode only affects the reported MAE.
        rng (Optional[np.random.Generator]): Random stream; seeded from
            config.seed when omitted.
        model (Optional[ModelSpec]): Multi-objective model this run mirrors.

    Returns:
        RunResult: algorithm "SOGA".
    """
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    evaluator = Evaluator(dataset, config.regression_mode, config.min_cluster_size)
    started = time.perf_counter()
    logger.info(
        f"Single-objective GA start: {config.init_method}, P={config.population_size}, "
        f"iterations={config.iterations}, seed={config.seed}"
    )

    pop = initial_population(dataset, config, evaluator, rng)
    history = [summarize_generation(pop, 0)]
    for generation in range(1, config.iterations + 1):
        offspring = evaluate_all(make_offspring(pop, config, rng, select=deviation_tournament), evaluator)
        pop = truncate_by_deviation(pop + offspring, config.population_size)
        rank_population(pop)
        history.append(summarize_generation(pop, generation))
        logger.debug(
            f"Generation {generation}: min deviation {history[-1].min_deviation:.6g}, "
            f"mean MAE {history[-1].mean_mae:.6g}"
        )

    elapsed = time.perf_counter() - started
    logger.info(f"Single-objective GA done in {elapsed:.2f}s; best deviation {history[-1].min_deviation:.6g}.")
    return RunResult(
        model=model,
        algorithm="SOGA",
        seed=config.seed,
        config=config,
        generations=history,
        population=pop,
        wall_time=elapsed,
    )
