# Expose the experiment harness: model matrix, runners, persistence and comparisons
from ..evolution.run_types import ModelSpec, RunResult, build_model_matrix, model_by_id
from .comparisons import (
    ModelComparison,
    MultiVsSingleRow,
    collect_final_samples,
    compare_models,
    compare_multi_vs_single,
    compare_samples,
    format_comparison_table,
    format_multi_vs_single_table,
    format_pairwise_table,
    multi_vs_single_rows,
    result_label,
)
from .experiment_config import (
    ALL_MODELS,
    REPLICATE_MODES,
    ExperimentConfig,
    config_hash,
    experiment_config_from_settings,
    run_seed,
)
from .results_io import (
    COMPARISON_FILE,
    MANIFEST_FILE,
    find_run_dirs,
    load_run_results,
    read_generations,
    read_run_result,
    write_json,
    write_run_result,
)
from .runner import CM_MODELS, ExperimentOutcome, execute_run, run_baseline_pairs, run_experiment

__all__ = [
    'ModelSpec', 'RunResult', 'build_model_matrix', 'model_by_id',
    'ModelComparison', 'MultiVsSingleRow', 'collect_final_samples', 'compare_models',
    'compare_multi_vs_single', 'compare_samples', 'format_comparison_table', 'format_multi_vs_single_table',
    'format_pairwise_table',
    'multi_vs_single_rows', 'result_label',
    'ALL_MODELS', 'REPLICATE_MODES', 'ExperimentConfig', 'config_hash',
    'experiment_config_from_settings', 'run_seed',
    'COMPARISON_FILE', 'MANIFEST_FILE', 'find_run_dirs', 'load_run_results',
    'read_generations', 'read_run_result', 'write_json', 'write_run_result',
    'CM_MODELS', 'ExperimentOutcome', 'execute_run', 'run_baseline_pairs', 'run_experiment',
]
