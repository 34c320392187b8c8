"""
Runs the model matrix and the single-objective baselines, one output directory
per run plus a manifest written once at the end.
"""
import logging
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from ..data_utils.dataset import Dataset, dataset_summary, load_csv
from ..evolution.baseline import run_soga
from ..evolution.nsga2 import run_nsga2
from ..evolution.run_types import ModelSpec, RunResult
from ..evolution.sgd import run_sgd_evolution
from .experiment_config import ExperimentConfig, config_hash
from .results_io import MANIFEST_FILE, run_dir_name, write_json, write_run_result

logger = logging.getLogger(__name__)

CM_MODELS: Tuple[int, ...] = (1, 2, 3, 4)


@dataclass
class ExperimentOutcome:
    """Results kept in memory plus the manifest written to disk."""
    output_dir: str
    manifest: Dict[str, Any]
    results: List[RunResult] = field(default_factory=list)

    @property
    def manifest_path(self) -> str:
        return os.path.join(self.output_dir, MANIFEST_FILE)

    @property
    def failed(self) -> List[Dict[str, Any]]:
        return [entry for entry in self.manifest["runs"] if entry["status"] != "ok"]


def load_experiment_dataset(config: ExperimentConfig) -> Dataset:
    return load_csv(config.data_path, target=config.target, normalization=config.normalization)


def execute_run(
    dataset: Dataset, config: ExperimentConfig, model: ModelSpec, replicate: int, algorithm: str = ""
) -> RunResult:
    """
    Runs one model replicate: NSGA-II for CM models, the SGD search for SGD
    models, or the deviation-only GA when algorithm is "SOGA".
    """
    run_config = config.run_config(model, replicate)
    if algorithm == "SOGA":
        result = run_soga(dataset, run_config, model=model)
    elif model.update == "SGD":
        result = run_sgd_evolution(dataset, run_config, config.sgd, model=model)
    else:
        result = run_nsga2(dataset, run_config, model=model)
    result.replicate = replicate
    return result


def _run_task(
    dataset: Dataset, config: ExperimentConfig, model: ModelSpec, replicate: int, algorithm: str
) -> Tuple[Dict[str, Any], Optional[RunResult]]:
    name = run_dir_name(model.id, replicate, algorithm)
    entry: Dict[str, Any] = {
        "model": model.id,
        "replicate": replicate,
        "algorithm": algorithm or ("SGD" if model.update == "SGD" else "NSGA-II"),
        "seed": config.run_config(model, replicate).seed,
        "run_dir": name,
    }
    try:
        result = execute_run(dataset, config, model, replicate, algorithm)
        write_run_result(
            result,
            os.path.join(config.output_dir, name),
            extra={"dataset": dataset_summary(dataset), "config_hash": config_hash(config)},
        )
    except Exception as e:  # any failure is recorded, the remaining runs go on
        logger.error(f"Run {name} ({model.describe()}) failed: {e}", exc_info=True)
        entry.update(status="failed", error=str(e))
        return entry, None
    entry["status"] = "ok"
    return entry, result


def run_tasks(
    config: ExperimentConfig,
    tasks: Sequence[Tuple[ModelSpec, int, str]],
    dataset: Optional[Dataset] = None,
) -> ExperimentOutcome:
    """
    Executes (model, replicate, algorithm) tasks, in parallel when jobs != 1,
    and writes the manifest after all of them finished. Failed runs are
    recorded in the manifest and do not stop the others.
    """
    dataset = dataset if dataset is not None else load_experiment_dataset(config)
    os.makedirs(config.output_dir, exist_ok=True)
    logger.info(f"Running {len(tasks)} runs into {config.output_dir} (jobs={config.jobs}).")

    if config.jobs == 1:
        outputs = [_run_task(dataset, config, *task) for task in tasks]
    else:
        # Seeds come from (model, replicate), so results do not depend on worker order
        outputs = Parallel(n_jobs=config.jobs)(
            delayed(_run_task)(dataset, config, *task) for task in tasks
        )

    manifest = {
        "config": config.to_dict(),
        "config_hash": config_hash(config),
        "dataset": dataset_summary(dataset),
        "runs": [entry for entry, _ in outputs],
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    write_json(manifest, os.path.join(config.output_dir, MANIFEST_FILE))
    outcome = ExperimentOutcome(config.output_dir, manifest, [r for _, r in outputs if r is not None])
    if outcome.failed:
        logger.warning(f"{len(outcome.failed)} of {len(tasks)} runs failed; see {outcome.manifest_path}")
    else:
        logger.info(f"All {len(tasks)} runs finished; manifest at {outcome.manifest_path}")
    return outcome


def run_experiment(config: ExperimentConfig, dataset: Optional[Dataset] = None) -> ExperimentOutcome:
    """
    Runs every selected model for every replicate.

    Args:
        config (ExperimentConfig): Models, replicates, settings, output directory.
        dataset (Optional[Dataset]): Preloaded data; loaded from config when omitted.

    Returns:
        ExperimentOutcome: In-memory results and the manifest.
    """
    tasks = [(model, r, "") for model in config.model_specs for r in range(config.replicates)]
    return run_tasks(config, tasks, dataset)


def run_baseline_pairs(
    config: ExperimentConfig, dataset: Optional[Dataset] = None
) -> ExperimentOutcome:
    """
    For each selected CM model and replicate, runs the multi-objective search
    and the deviation-only GA with the same seed and budget.

    Raises:
        ValueError: If a selected model uses the SGD update.
    """
    not_cm = [m for m in config.models if m not in CM_MODELS]
    if not_cm:
        raise ValueError(f"Baseline comparison supports CM models {CM_MODELS} only, got {not_cm}")
    tasks = []
    for model in config.model_specs:
        for r in range(config.replicates):
            tasks.append((model, r, ""))
            tasks.append((model, r, "SOGA"))
    return run_tasks(config, tasks, dataset)
