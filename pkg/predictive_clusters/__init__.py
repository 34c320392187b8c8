# Aggregate the public API of every sub-package
from .clustering import Evaluator, ObjectiveValues, Partition, decode, encode_star, evaluate
from .data_utils import Dataset, DatasetError, load_csv, make_two_blobs, normalize
from .evolution import (
    EvolutionConfig,
    Individual,
    ModelSpec,
    RunResult,
    SgdParams,
    build_model_matrix,
    run_nsga2,
    run_sgd_evolution,
    run_soga,
)
from .experiments import (
    ExperimentConfig,
    compare_models,
    compare_multi_vs_single,
    load_run_results,
    run_experiment,
)
from .shared_utils import ConfigError, resolve_settings, setup_logging
from .stats_utils import anova_oneway, ttest_ind, tukey_hsd

__version__ = "0.1.0"

__all__ = [
    'Evaluator', 'ObjectiveValues', 'Partition', 'decode', 'encode_star', 'evaluate',
    'Dataset', 'DatasetError', 'load_csv', 'make_two_blobs', 'normalize',
    'EvolutionConfig', 'Individual', 'ModelSpec', 'RunResult', 'SgdParams',
    'build_model_matrix', 'run_nsga2', 'run_sgd_evolution', 'run_soga',
    'ExperimentConfig', 'compare_models', 'compare_multi_vs_single', 'load_run_results',
    'run_experiment',
    'ConfigError', 'resolve_settings', 'setup_logging',
    'anova_oneway', 'ttest_ind', 'tukey_hsd',
    '__version__',
]
