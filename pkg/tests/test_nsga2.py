import math

import numpy as np
import pytest

from predictive_clusters.clustering.genotype import decode
from predictive_clusters.clustering.objectives import ObjectiveValues
from predictive_clusters.data_utils.dataset import outcome_sd
from predictive_clusters.evolution.nsga2 import (
    binary_tournament,
    crowded_better,
    crowding_distance,
    dominates,
    environmental_selection,
    fast_nondominated_sort,
    make_offspring,
    nondominated_fronts,
    offspring_counts,
    rank_population,
    run_nsga2,
)
from predictive_clusters.evolution.run_types import EvolutionConfig, Individual


def population(pairs):
    return [Individual(genotype=np.array([1]), objectives=ObjectiveValues(float(a), float(b))) for a, b in pairs]


def without_timing(result):
    data = result.to_dict()
    data.pop("timing")
    return data


# --- Dominance and sorting ---

def test_dominates():
    assert dominates(ObjectiveValues(1, 2), ObjectiveValues(2, 3))
    assert not dominates(ObjectiveValues(1, 3), ObjectiveValues(3, 1))
    assert not dominates(ObjectiveValues(3, 1), ObjectiveValues(1, 3))
    assert not dominates(ObjectiveValues(1, 2), ObjectiveValues(1, 2))


def test_fronts_hand_example():
    pop = population([(1, 5), (2, 2), (5, 1), (3, 3), (4, 4)])
    fronts = fast_nondominated_sort(pop)
    assert fronts == [[0, 1, 2], [3], [4]]
    assert [ind.rank for ind in pop] == [1, 1, 1, 2, 3]


def test_identical_objectives_form_one_front():
    assert nondominated_fronts(np.ones((6, 2))) == [list(range(6))]


def test_chain_gives_singleton_fronts():
    assert nondominated_fronts(np.array([[3, 3], [1, 1], [2, 2]])) == [[1], [2], [0]]


def test_sorting_matches_brute_force(rng):
    for _ in range(500):
        n = int(rng.integers(2, 201))
        values = rng.integers(0, 25, size=(n, 2)).astype(float)
        pairs = [ObjectiveValues(*row) for row in values]
        fronts = nondominated_fronts(values)
        assert sorted(i for front in fronts for i in front) == list(range(n))
        rank = np.empty(n, dtype=int)
        for f, front in enumerate(fronts):
            rank[front] = f
        for i in range(n):
            dominators = [rank[j] for j in range(n) if dominates(pairs[j], pairs[i])]
            # Nobody in the same or a later front dominates i ...
            assert all(r < rank[i] for r in dominators)
            # ... and something in the previous front does.
            if rank[i] > 0:
                assert rank[i] - 1 in dominators


# --- Crowding ---

def test_crowding_hand_example():
    pop = population([(1, 3), (2, 2), (3, 1)])
    crowding_distance([0, 1, 2], pop)
    assert [ind.crowding for ind in pop] == [math.inf, 2.0, math.inf]


def test_small_fronts_are_all_boundary():
    pop = population([(1, 3), (2, 2)])
    crowding_distance([0, 1], pop)
    assert all(ind.crowding == math.inf for ind in pop)


def test_duplicates_get_finite_crowding():
    pop = population([(1, 3), (2, 2), (2, 2), (3, 1)])
    crowding_distance([0, 1, 2, 3], pop)
    assert pop[0].crowding == pop[3].crowding == math.inf
    assert math.isfinite(pop[1].crowding) and math.isfinite(pop[2].crowding)


def test_zero_range_objective_adds_nothing():
    pop = population([(1, 5), (1, 5), (1, 5)])
    crowding_distance([0, 1, 2], pop)
    assert pop[1].crowding == 0.0


# --- Selection ---

def test_crowded_comparison():
    pop = population([(1, 1), (2, 2), (3, 3)])
    pop[0].rank, pop[1].rank, pop[2].rank = 1, 2, 1
    pop[0].crowding, pop[2].crowding = 2.0, math.inf
    assert crowded_better(pop, 0, 1) == 0
    assert crowded_better(pop, 0, 2) == 2
    pop[2].crowding = 2.0
    assert crowded_better(pop, 2, 0) == 0


def test_binary_tournament_prefers_better_ranks(rng):
    pop = population([(1, 1), (2, 2)])
    rank_population(pop)
    wins = sum(binary_tournament(pop, rng) is pop[0] for _ in range(400))
    # The worse individual only wins when drawn twice: about a quarter of the time.
    assert 250 < wins < 350


@pytest.mark.parametrize(
    "size, expected", [(100, (90, 3)), (10, (8, 1)), (2, (2, 1)), (50, (44, 2))]
)
def test_offspring_counts(size, expected):
    assert offspring_counts(size, 90.0, 3.0) == expected


def test_offspring_counts_without_crossover():
    assert offspring_counts(100, 0.0, 3.0) == (0, 3)


def test_make_offspring_builds_unevaluated_children(rng):
    pop = [
        Individual(genotype=rng.integers(1, 8, size=7), objectives=ObjectiveValues(float(i), float(10 - i)))
        for i in range(10)
    ]
    rank_population(pop)
    offspring = make_offspring(pop, EvolutionConfig(population_size=10), rng)
    assert len(offspring) == 9
    assert not any(ind.evaluated for ind in offspring)
    assert all(len(ind.genotype) == 7 for ind in offspring)


def test_environmental_selection_fills_by_fronts():
    combined = population([(2, 5), (6, 6), (1, 4), (3, 4.5), (4, 1), (5, 2)])
    survivors = environmental_selection(combined, 4)
    assert [ind.objectives.as_tuple() for ind in survivors] == [(2, 5), (1, 4), (4, 1), (5, 2)]


def test_environmental_selection_identity_when_sizes_match():
    combined = population([(1, 5), (2, 2), (5, 1), (3, 3)])
    survivors = environmental_selection(combined, 4)
    assert all(a is b for a, b in zip(survivors, combined))


def test_environmental_selection_ties_go_to_lower_index():
    combined = population([(3, 2), (1, 1), (2, 3)])
    survivors = environmental_selection(combined, 2)
    assert [ind.objectives.as_tuple() for ind in survivors] == [(3, 2), (1, 1)]


def test_environmental_selection_needs_enough_candidates():
    with pytest.raises(ValueError):
        environmental_selection(population([(1, 1)]), 2)


# --- Runs ---

def test_zero_iterations_keeps_initial_population(blobs):
    result = run_nsga2(blobs, EvolutionConfig(population_size=10, iterations=0, seed=1))
    assert len(result.generations) == 1
    assert result.generations[0].generation == 0
    assert len(result.population) == 10
    assert all(ind.rank >= 1 for ind in result.population)


def test_runs_are_deterministic(blobs, tiny_config):
    first, second = run_nsga2(blobs, tiny_config), run_nsga2(blobs, tiny_config)
    assert without_timing(first) == without_timing(second)


@pytest.mark.parametrize("init, mode", [("RSO", "LR"), ("RC", "CP")])
def test_elitism_and_constant_size(blobs, init, mode):
    config = EvolutionConfig(population_size=12, iterations=8, seed=4, init_method=init, regression_mode=mode)
    result = run_nsga2(blobs, config)
    assert len(result.generations) == 9
    min_dev = [row.min_deviation for row in result.generations]
    min_mae = [row.min_mae for row in result.generations]
    assert all(b <= a for a, b in zip(min_dev, min_dev[1:]))
    assert all(b <= a for a, b in zip(min_mae, min_mae[1:]))
    assert len(result.population) == 12


def test_final_front_is_nondominated(blobs, tiny_config):
    result = run_nsga2(blobs, tiny_config)
    for ind in result.front(1):
        assert not any(dominates(other.objectives, ind.objectives) for other in result.population)
    assert result.generations[-1].front1_size == len(result.front(1))
    for ind in result.population:
        assert decode(ind.genotype).k == ind.k


@pytest.mark.slow
def test_two_blobs_front_contains_the_true_split():
    from predictive_clusters.data_utils.dataset import make_two_blobs

    dataset = make_two_blobs()
    result = run_nsga2(dataset, EvolutionConfig(population_size=100, iterations=100, seed=0))
    threshold = 0.1 * outcome_sd(dataset)
    assert any(ind.k == 2 and ind.objectives.mae < threshold for ind in result.front(1))
