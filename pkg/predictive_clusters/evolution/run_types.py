"""
Data types shared by the search engines and the experiment harness: model
definitions, run configuration, individuals and run results.
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..clustering.evaluation import Evaluation
from ..clustering.genotype import INIT_METHODS, Genotype
from ..clustering.objectives import REGRESSION_MODES, ObjectiveValues

logger = logging.getLogger(__name__)

UPDATE_METHODS: Tuple[str, ...] = ("CM", "SGD")
ALGORITHMS: Tuple[str, ...] = ("NSGA-II", "SGD", "SOGA")


# --- Model matrix ---

@dataclass(frozen=True)
class ModelSpec:
    """One row of the eight-model matrix."""
    id: int
    init: str
    regression: str
    update: str

    @property
    def label(self) -> str:
        return f"model {self.id}"

    def describe(self) -> str:
        return f"{self.label} ({self.init}, {self.regression}, {self.update})"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelSpec":
        return cls(int(data["id"]), str(data["init"]), str(data["regression"]), str(data["update"]))


def build_model_matrix() -> List[ModelSpec]:
    """
    The 2x2x2 matrix: initialisation varies fastest, then regression mode, then
    update method (1 = RSO/CP/CM ... 8 = RC/LR/SGD).
    """
    specs = []
    model_id = 1
    for update in UPDATE_METHODS:
        for regression in ("CP", "LR"):
            for init in INIT_METHODS:
                specs.append(ModelSpec(model_id, init, regression, update))
                model_id += 1
    return specs


def model_by_id(model_id: int) -> ModelSpec:
    for spec in build_model_matrix():
        if spec.id == model_id:
            return spec
    raise ValueError(f"Unknown model id {model_id}; expected 1..8")


def find_model(init: str, regression: str, update: str) -> ModelSpec:
    for spec in build_model_matrix():
        if (spec.init, spec.regression, spec.update) == (init, regression, update):
            return spec
    raise ValueError(f"No model for ({init}, {regression}, {update})")


# --- Configuration ---

@dataclass(frozen=True)
class EvolutionConfig:
    """Search settings of one run. Init method and regression mode are per model."""
    population_size: int = 100
    iterations: int = 100
    crossover_pct: float = 90.0
    mutation_pct: float = 3.0
    regression_mode: str = "LR"
    init_method: str = "RSO"
    seed: int = 0
    min_cluster_size: int = 0

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError(f"population_size must be >= 2, got {self.population_size}")
        if self.iterations < 0:
            raise ValueError(f"iterations must be >= 0, got {self.iterations}")
        for name in ("crossover_pct", "mutation_pct"):
            value = getattr(self, name)
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"{name} must lie in [0, 100], got {value}")
        if self.regression_mode not in REGRESSION_MODES:
            raise ValueError(f"regression_mode must be one of {REGRESSION_MODES}")
        if self.init_method not in INIT_METHODS:
            raise ValueError(f"init_method must be one of {INIT_METHODS}")
        if self.min_cluster_size < 0:
            raise ValueError(f"min_cluster_size must be >= 0, got {self.min_cluster_size}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SgdParams:
    """Learning-rate constants of the SGD k-medians update."""
    c_gamma: float = 2000.0
    c_alpha: float = 1.0
    alpha: float = 0.75

    def __post_init__(self) -> None:
        if self.c_gamma < 0 or self.c_alpha <= 0:
            raise ValueError(f"Need c_gamma >= 0 and c_alpha > 0, got {self}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# --- Individuals ---

@dataclass(eq=False)
class Individual:
    """
    A chromosome with its objectives and NSGA-II bookkeeping. Offspring carry
    objectives=None until evaluated.
    """
    genotype: Genotype
    objectives: Optional[ObjectiveValues] = None
    k: int = 0
    rank: int = 0
    crowding: float = 0.0

    @classmethod
    def from_evaluation(cls, evaluation: Evaluation) -> "Individual":
        return cls(
            genotype=evaluation.genotype,
            objectives=evaluation.objectives,
            k=evaluation.partition.k,
        )

    @property
    def evaluated(self) -> bool:
        return self.objectives is not None


def objective_matrix(pop: List[Individual]) -> np.ndarray:
    """[P, 2] array of (deviation, MAE); every individual must be evaluated."""
    missing = [i for i, ind in enumerate(pop) if ind.objectives is None]
    if missing:
        raise ValueError(f"Individuals {missing[:5]} are not evaluated")
    return np.array([ind.objectives.as_tuple() for ind in pop], dtype=np.float64).reshape(-1, 2)


# --- Results ---

@dataclass(frozen=True)
class GenerationStats:
    generation: int
    mean_deviation: float
    min_deviation: float
    mean_mae: float
    min_mae: float
    front1_size: int


GENERATION_COLUMNS: Tuple[str, ...] = (
    "generation", "mean_deviation", "min_deviation", "mean_mae", "min_mae", "front1_size",
)
FINAL_POPULATION_COLUMNS: Tuple[str, ...] = ("id", "k", "deviation", "mae", "rank", "crowding")


def summarize_generation(pop: List[Individual], generation: int) -> GenerationStats:
    """Per-generation statistics row; ranks must be current."""
    values = objective_matrix(pop)
    return GenerationStats(
        generation=generation,
        mean_deviation=float(values[:, 0].mean()),
        min_deviation=float(values[:, 0].min()),
        mean_mae=float(values[:, 1].mean()),
        min_mae=float(values[:, 1].min()),
        front1_size=int(sum(1 for ind in pop if ind.rank == 1)),
    )


@dataclass
class RunResult:
    """Trajectory and final population of one search run."""
    model: Optional[ModelSpec]
    algorithm: str
    seed: int
    config: EvolutionConfig
    generations: List[GenerationStats] = field(default_factory=list)
    population: List[Individual] = field(default_factory=list)
    sgd_params: Optional[SgdParams] = None
    wall_time: float = 0.0
    replicate: int = 0

    def final_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for i, ind in enumerate(self.population):
            rows.append({
                "id": i,
                "k": int(ind.k),
                "deviation": float(ind.objectives.deviation),
                "mae": float(ind.objectives.mae),
                "rank": int(ind.rank),
                "crowding": float(ind.crowding),
            })
        return rows

    def final_values(self, objective: str) -> np.ndarray:
        """Final-population values of "deviation" or "mae"."""
        if objective not in ("deviation", "mae"):
            raise ValueError(f"Unknown objective {objective!r}")
        return np.array([getattr(ind.objectives, objective) for ind in self.population])

    def front(self, rank: int = 1) -> List[Individual]:
        return [ind for ind in self.population if ind.rank == rank]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.to_dict() if self.model else None,
            "algorithm": self.algorithm,
            "seed": int(self.seed),
            "replicate": int(self.replicate),
            "config": self.config.to_dict(),
            "sgd_params": self.sgd_params.to_dict() if self.sgd_params else None,
            "generations": [asdict(row) for row in self.generations],
            "final_population": self.final_rows(),
            "final_genotypes": [ind.genotype.tolist() for ind in self.population],
            "timing": {"wall_time": float(self.wall_time)},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunResult":
        genotypes = data.get("final_genotypes") or [[] for _ in data["final_population"]]
        population = [
            Individual(
                genotype=np.asarray(g, dtype=np.int64),
                objectives=ObjectiveValues(float(row["deviation"]), float(row["mae"])),
                k=int(row["k"]),
                rank=int(row["rank"]),
                crowding=float(row["crowding"]),
            )
            for row, g in zip(data["final_population"], genotypes)
        ]
        return cls(
            model=ModelSpec.from_dict(data["model"]) if data.get("model") else None,
            algorithm=data["algorithm"],
            seed=int(data["seed"]),
            config=EvolutionConfig(**data["config"]),
            generations=[GenerationStats(**row) for row in data["generations"]],
            population=population,
            sgd_params=SgdParams(**data["sgd_params"]) if data.get("sgd_params") else None,
            wall_time=float(data.get("timing", {}).get("wall_time", 0.0)),
            replicate=int(data.get("replicate", 0)),
        )
