"""
Command-line front end: run one model, the full matrix, the single-objective
baseline comparison, statistics over existing results, and plots.
"""
import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from ..data_utils.dataset import NORMALIZATION_MODES, DatasetError, dataset_summary
from ..evolution.run_types import model_by_id
from ..experiments.comparisons import (
    compare_models,
    format_comparison_table,
    format_multi_vs_single_table,
    multi_vs_single_rows,
)
from ..experiments.experiment_config import (
    REPLICATE_MODES,
    ExperimentConfig,
    config_hash,
    experiment_config_from_settings,
)
from ..experiments.results_io import COMPARISON_FILE, load_run_results, write_json, write_run_result
from ..experiments.runner import (
    CM_MODELS,
    execute_run,
    load_experiment_dataset,
    run_baseline_pairs,
    run_experiment,
)
from ..plotting.result_plots import make_plots
from ..shared_utils.config_manager import DEFAULTS, ConfigError, resolve_settings
from ..shared_utils.console_io import format_table, safe_print
from ..shared_utils.logging_utils import setup_logging
from ..stats_utils.distributions import StatsError

logger = logging.getLogger(__name__)

PROG = "predclusters"
BASELINE_REPORT_FILE = "baseline_report.json"


class UsageError(ValueError):
    """Option combination that can never produce a result; exits with status 2."""


# argparse dest -> settings key
SETTING_FLAGS: Dict[str, str] = {
    "pop": "population_size",
    "iters": "iterations",
    "crossover_pct": "crossover_pct",
    "mutation_pct": "mutation_pct",
    "sgd_cgamma": "sgd_c_gamma",
    "sgd_calpha": "sgd_c_alpha",
    "sgd_alpha": "sgd_alpha",
    "seed": "seed",
    "target": "target",
    "normalize": "normalize",
    "replicates": "replicates",
    "replicate_mode": "replicate_mode",
    "min_cluster_size": "min_cluster_size",
    "jobs": "jobs",
    "alpha": "alpha",
}


# --- Parser ---

def _model_id(text: str) -> int:
    try:
        value = int(text)
        model_by_id(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"model must be an integer in 1..8, got {text!r}") from None
    return value


def _model_list(text: str) -> List[int]:
    return [_model_id(part) for part in text.split(",") if part.strip()]


def _add_common(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("general")
    group.add_argument("--config", help="JSON config file (default: ./predclusters.json if present)")
    group.add_argument(
        "--log-level", default="INFO", choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="Logging level (default: INFO)",
    )
    group.add_argument("--log-file", help="Also write the log to this file")


def _add_data(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("data")
    group.add_argument("--data", required=True, help="CSV file with a header row")
    group.add_argument(
        "--target", help="Outcome column: name, 0-based index or 'last' (default: last)",
    )
    group.add_argument(
        "--normalize", choices=NORMALIZATION_MODES, help="Feature normalisation (default: none)",
    )


def _add_search(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("search")
    group.add_argument("--pop", type=int, help=f"Population size (default: {DEFAULTS['population_size']})")
    group.add_argument("--iters", type=int, help=f"Generations (default: {DEFAULTS['iterations']})")
    group.add_argument("--seed", type=int, help="Base seed (default: $PREDCLUSTERS_SEED or 0)")
    group.add_argument(
        "--crossover-pct", type=float, help=f"Crossover percentage (default: {DEFAULTS['crossover_pct']:g})",
    )
    group.add_argument(
        "--mutation-pct", type=float, help=f"Mutation percentage (default: {DEFAULTS['mutation_pct']:g})",
    )
    group.add_argument("--sgd-cgamma", type=float, help=f"SGD c_gamma (default: {DEFAULTS['sgd_c_gamma']:g})")
    group.add_argument("--sgd-calpha", type=float, help=f"SGD c_alpha (default: {DEFAULTS['sgd_c_alpha']:g})")
    group.add_argument("--sgd-alpha", type=float, help=f"SGD alpha exponent (default: {DEFAULTS['sgd_alpha']:g})")
    group.add_argument(
        "--min-cluster-size", type=int,
        help="Repair clusters smaller than this before evaluation (default: 0, off)",
    )


def _add_experiment(parser: argparse.ArgumentParser, default_models: str) -> None:
    group = parser.add_argument_group("experiment")
    group.add_argument(
        "--models", type=_model_list, help=f"Comma-separated model ids (default: {default_models})",
    )
    group.add_argument("--replicates", type=int, help="Runs per model (default: 1)")
    group.add_argument(
        "--replicate-mode", choices=REPLICATE_MODES,
        help="How replicates enter the statistics (default: pool)",
    )
    group.add_argument("--jobs", type=int, help="Parallel runs, joblib convention (default: 1)")
    group.add_argument("--alpha", type=float, help="Significance level (default: 0.05)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Multi-objective semi-supervised clustering with NSGA-II or SGD k-medians updates.",
    )
    sub = parser.add_subparsers(dest="command", metavar="{run,matrix,baseline,compare,plot}")
    sub.required = True

    run = sub.add_parser("run", help="Run one model of the matrix")
    run.add_argument("--model", type=_model_id, required=True, help="Model id 1..8")
    _add_data(run)
    _add_search(run)
    run.add_argument("--out", required=True, help="Output directory for the run files")
    _add_common(run)

    matrix = sub.add_parser("matrix", help="Run the model matrix and compare the models")
    _add_data(matrix)
    _add_search(matrix)
    _add_experiment(matrix, "1-8")
    matrix.add_argument("--out", required=True, help="Experiment output directory")
    _add_common(matrix)

    baseline = sub.add_parser("baseline", help="Multi- vs single-objective MAE comparison (models 1-4)")
    _add_data(baseline)
    _add_search(baseline)
    _add_experiment(baseline, "1,2,3,4")
    baseline.add_argument("--out", required=True, help="Experiment output directory")
    _add_common(baseline)

    compare = sub.add_parser("compare", help="Statistics over existing result directories")
    compare.add_argument("--in", dest="inputs", nargs="+", required=True, help="Result files or directories")
    compare.add_argument("--alpha", type=float, help="Significance level (default: 0.05)")
    compare.add_argument("--replicate-mode", choices=REPLICATE_MODES, help="(default: pool)")
    compare.add_argument("--out", help=f"Where to write the JSON report (default: <first input>/{COMPARISON_FILE})")
    _add_common(compare)

    plot = sub.add_parser("plot", help="SVG trajectory and box plots from result directories")
    plot.add_argument("--in", dest="inputs", required=True, help="Run directory or experiment directory")
    plot.add_argument("--out", required=True, help="Directory for the SVG files")
    _add_common(plot)
    return parser


# --- Commands ---

def _settings(args: argparse.Namespace) -> Dict[str, Any]:
    overrides = {key: getattr(args, dest, None) for dest, key in SETTING_FLAGS.items()}
    return resolve_settings(overrides, args.config)


def _experiment_config(args: argparse.Namespace, models: Optional[Sequence[int]]) -> ExperimentConfig:
    return experiment_config_from_settings(_settings(args), args.data, args.out, models)


def _check_replicate_mode(config: ExperimentConfig) -> None:
    # One mean per replicate: a single replicate leaves one value per group,
    # which ANOVA and the t-test both reject, so fail before any run starts.
    if config.replicate_mode == "replicate_means" and config.replicates < 2:
        raise UsageError(
            f"--replicate-mode replicate_means needs --replicates >= 2 (got {config.replicates})"
        )


def _front_table(rows: List[Dict[str, Any]]) -> str:
    front = sorted((r for r in rows if r["rank"] == 1), key=lambda r: (r["deviation"], r["id"]))
    return format_table(
        ["id", "K", "deviation", "MAE"], [[r["id"], r["k"], r["deviation"], r["mae"]] for r in front]
    )


def cmd_run(args: argparse.Namespace) -> int:
    config = _experiment_config(args, [args.model])
    model = model_by_id(args.model)
    dataset = load_experiment_dataset(config)
    result = execute_run(dataset, config, model, replicate=0)
    path = write_run_result(
        result, args.out, extra={"dataset": dataset_summary(dataset), "config_hash": config_hash(config)}
    )
    safe_print(f"{model.describe()}: final front 1 ({len(result.front(1))} solutions)")
    safe_print(_front_table(result.final_rows()))
    safe_print(f"Results written to {path}")
    return 0


def _write_comparison(results, alpha: float, replicate_mode: str, path: str) -> None:
    comparison = compare_models(results, alpha, replicate_mode)
    write_json(comparison.to_dict(), path)
    safe_print(format_comparison_table(comparison))
    safe_print(f"Comparison written to {path}")


def cmd_matrix(args: argparse.Namespace) -> int:
    config = _experiment_config(args, args.models)
    _check_replicate_mode(config)
    outcome = run_experiment(config)
    if len({r.model.id for r in outcome.results}) < 2:
        logger.warning("Fewer than two models finished; skipping the comparison.")
        return 1 if outcome.failed else 0
    _write_comparison(
        outcome.results, config.alpha, config.replicate_mode, os.path.join(config.output_dir, COMPARISON_FILE)
    )
    return 1 if outcome.failed else 0


def cmd_baseline(args: argparse.Namespace) -> int:
    config = _experiment_config(args, args.models or CM_MODELS)
    _check_replicate_mode(config)
    outcome = run_baseline_pairs(config)
    rows = multi_vs_single_rows(outcome.results, config.replicate_mode)
    path = os.path.join(config.output_dir, BASELINE_REPORT_FILE)
    write_json({"alpha": config.alpha, "rows": [row.to_dict() for row in rows]}, path)
    safe_print(format_multi_vs_single_table(rows))
    safe_print(f"Baseline report written to {path}")
    return 1 if outcome.failed else 0


def cmd_compare(args: argparse.Namespace) -> int:
    settings = _settings(args)
    results = load_run_results(args.inputs)
    first = args.inputs[0]
    out = args.out or os.path.join(first if os.path.isdir(first) else os.path.dirname(first), COMPARISON_FILE)
    _write_comparison(results, float(settings["alpha"]), str(settings["replicate_mode"]), out)
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    for path in make_plots(args.inputs, args.out):
        safe_print(path)
    return 0


COMMANDS = {
    "run": cmd_run,
    "matrix": cmd_matrix,
    "baseline": cmd_baseline,
    "compare": cmd_compare,
    "plot": cmd_plot,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point. Returns 0 on success, 2 on usage errors, 1 on data, config or
    run failures (message on stderr).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(args.log_level, args.log_file)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"{PROG} {args.command}: error: {e}", file=sys.stderr)
        return 2
    except (DatasetError, ConfigError, StatsError, FileNotFoundError, ValueError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"{PROG} {args.command}: error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"Unexpected failure in '{args.command}': {e}", exc_info=True)
        print(f"{PROG} {args.command}: unexpected error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
