# Expose the clustering API: chromosomes, objectives and the evaluation pipeline
from .evaluation import Evaluation, Evaluator, repair_small_clusters, representatives_nearest_centers
from .genotype import (
    INIT_METHODS,
    Genotype,
    GenotypeError,
    KOutOfRangeError,
    LengthMismatchError,
    Partition,
    RepresentativeOutsideClusterError,
    assign_nearest,
    decode,
    encode_star,
    init_population,
    init_rc,
    init_rso,
    partition_from_labels,
    rso_k_schedule,
    swap_mutation,
    uniform_crossover,
    validate_genotype,
)
from .objectives import (
    REGRESSION_MODES,
    ClusterRegression,
    NonFiniteInputError,
    ObjectiveValues,
    compute_centers,
    deviation,
    evaluate,
    evaluate_partition,
    fit_cp,
    fit_lr,
    fit_regression,
    mae,
    solve_least_squares,
)

__all__ = [
    'Evaluation', 'Evaluator', 'repair_small_clusters', 'representatives_nearest_centers',
    'INIT_METHODS', 'Genotype', 'GenotypeError', 'KOutOfRangeError', 'LengthMismatchError',
    'Partition', 'RepresentativeOutsideClusterError', 'decode', 'encode_star',
    'init_population', 'init_rc', 'init_rso', 'assign_nearest',
    'partition_from_labels', 'rso_k_schedule', 'swap_mutation', 'uniform_crossover',
    'validate_genotype',
    'REGRESSION_MODES', 'ClusterRegression', 'NonFiniteInputError', 'ObjectiveValues',
    'compute_centers', 'deviation', 'evaluate', 'evaluate_partition', 'fit_cp', 'fit_lr',
    'fit_regression', 'mae', 'solve_least_squares',
]
