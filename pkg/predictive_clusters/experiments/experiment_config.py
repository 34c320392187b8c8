"""
Experiment configuration: which models to run on which data, how often, and
with which search settings.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Sequence, Tuple

from ..data_utils.dataset import NORMALIZATION_MODES
from ..evolution.run_types import EvolutionConfig, ModelSpec, SgdParams, model_by_id

logger = logging.getLogger(__name__)

REPLICATE_MODES: Tuple[str, ...] = ("pool", "replicate_means")
ALL_MODELS: Tuple[int, ...] = tuple(range(1, 9))
SEED_MODEL_STRIDE = 10_000


def run_seed(base_seed: int, model_id: int, replicate: int) -> int:
    """Seed of one run: base + model_id * 10^4 + replicate."""
    return int(base_seed) + int(model_id) * SEED_MODEL_STRIDE + int(replicate)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything needed to reproduce a set of runs. `evolution.seed` is the base
    seed; init method and regression mode come from each model.
    """
    data_path: str
    output_dir: str
    models: Tuple[int, ...] = ALL_MODELS
    replicates: int = 1
    target: str = "last"
    normalization: str = "none"
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    sgd: SgdParams = field(default_factory=SgdParams)
    min_cluster_size: int = 0
    replicate_mode: str = "pool"
    jobs: int = 1
    alpha: float = 0.05

    def __post_init__(self) -> None:
        object.__setattr__(self, "models", tuple(int(m) for m in self.models))
        if not self.models:
            raise ValueError("At least one model must be selected")
        for model_id in self.models:
            model_by_id(model_id)
        if len(set(self.models)) != len(self.models):
            raise ValueError(f"Duplicate model ids: {list(self.models)}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.normalization not in NORMALIZATION_MODES:
            raise ValueError(f"normalization must be one of {NORMALIZATION_MODES}")
        if self.replicate_mode not in REPLICATE_MODES:
            raise ValueError(f"replicate_mode must be one of {REPLICATE_MODES}")
        if self.min_cluster_size < 0:
            raise ValueError(f"min_cluster_size must be >= 0, got {self.min_cluster_size}")
        if self.jobs == 0:
            raise ValueError("jobs must be a positive count or negative (joblib convention)")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def model_specs(self) -> Tuple[ModelSpec, ...]:
        return tuple(model_by_id(m) for m in self.models)

    def run_config(self, model: ModelSpec, replicate: int) -> EvolutionConfig:
        """Search settings of one (model, replicate) run."""
        return replace(
            self.evolution,
            init_method=model.init,
            regression_mode=model.regression,
            seed=run_seed(self.evolution.seed, model.id, replicate),
            min_cluster_size=self.min_cluster_size,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "data_path": self.data_path,
            "output_dir": self.output_dir,
            "models": list(self.models),
            "replicates": self.replicates,
            "target": self.target,
            "normalization": self.normalization,
            "evolution": self.evolution.to_dict(),
            "sgd": self.sgd.to_dict(),
            "min_cluster_size": self.min_cluster_size,
            "replicate_mode": self.replicate_mode,
            "jobs": self.jobs,
            "alpha": self.alpha,
        }


def config_hash(config: ExperimentConfig) -> str:
    """sha256 of the canonical JSON of every setting that affects results."""
    data = config.to_dict()
    for key in ("output_dir", "jobs"):
        data.pop(key)
    return hashlib.sha256(
        json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8")
    ).hexdigest()


def experiment_config_from_settings(
    settings: Dict[str, Any],
    data_path: str,
    output_dir: str,
    models: Optional[Sequence[int]] = None,
) -> ExperimentConfig:
    """
    Builds an ExperimentConfig from a resolved settings dict (see
    shared_utils.config_manager.resolve_settings).

    Raises:
        ValueError: If a setting is invalid.
    """
    try:
        evolution = EvolutionConfig(
            population_size=int(settings["population_size"]),
            iterations=int(settings["iterations"]),
            crossover_pct=float(settings["crossover_pct"]),
            mutation_pct=float(settings["mutation_pct"]),
            seed=int(settings["seed"]),
        )
        sgd = SgdParams(
            c_gamma=float(settings["sgd_c_gamma"]),
            c_alpha=float(settings["sgd_c_alpha"]),
            alpha=float(settings["sgd_alpha"]),
        )
        return ExperimentConfig(
            data_path=data_path,
            output_dir=output_dir,
            models=tuple(models) if models else ALL_MODELS,
            replicates=int(settings["replicates"]),
            target=str(settings["target"]),
            normalization=str(settings["normalize"]),
            evolution=evolution,
            sgd=sgd,
            min_cluster_size=int(settings["min_cluster_size"]),
            replicate_mode=str(settings["replicate_mode"]),
            jobs=int(settings["jobs"]),
            alpha=float(settings["alpha"]),
        )
    except (TypeError, KeyError) as e:
        logger.error(f"Invalid experiment settings: {e}")
        raise ValueError(f"Invalid experiment settings: {e}") from e
