# Expose the search engines and their shared run types
from .baseline import deviation_tournament, run_soga, truncate_by_deviation
from .nsga2 import (
    assign_crowding,
    binary_tournament,
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
from .run_types import (
    ALGORITHMS,
    FINAL_POPULATION_COLUMNS,
    GENERATION_COLUMNS,
    EvolutionConfig,
    GenerationStats,
    Individual,
    ModelSpec,
    RunResult,
    SgdParams,
    build_model_matrix,
    find_model,
    model_by_id,
    summarize_generation,
)
from .sgd import improve_solution, learning_rate, run_sgd_evolution, sgd_center_step

__all__ = [
    'deviation_tournament', 'run_soga', 'truncate_by_deviation',
    'assign_crowding', 'binary_tournament', 'crowding_distance', 'dominates',
    'environmental_selection', 'fast_nondominated_sort', 'make_offspring',
    'nondominated_fronts', 'offspring_counts', 'rank_population', 'run_nsga2',
    'ALGORITHMS', 'FINAL_POPULATION_COLUMNS', 'GENERATION_COLUMNS', 'EvolutionConfig',
    'GenerationStats', 'Individual', 'ModelSpec', 'RunResult', 'SgdParams',
    'build_model_matrix', 'find_model', 'model_by_id', 'summarize_generation',
    'improve_solution', 'learning_rate', 'run_sgd_evolution', 'sgd_center_step',
]
