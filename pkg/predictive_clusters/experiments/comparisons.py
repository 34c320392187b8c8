"""
Statistical comparisons over finished runs: best-model selection across the
matrix (ANOVA + Tukey per objective, then the intersection over both
objectives) and multi- versus single-objective MAE t-tests.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

from ..data_utils.dataset import Dataset
from ..evolution.run_types import RunResult
from ..shared_utils.console_io import format_table
from ..stats_utils.hypothesis_tests import SampleGroup, StatsReport, compare_groups, ttest_ind
from .experiment_config import REPLICATE_MODES, ExperimentConfig
from .runner import CM_MODELS, run_baseline_pairs

logger = logging.getLogger(__name__)

OBJECTIVES = ("deviation", "mae")
OBJECTIVE_TITLES = {"deviation": "Deviation", "mae": "MAE"}


def result_label(result: RunResult) -> str:
    """Group label of a run: "model N", or "GA (model N)" for the deviation-only GA."""
    base = result.model.label if result.model else "unlabelled"
    return f"GA ({base})" if result.algorithm == "SOGA" else base


def _label_order(label: str) -> tuple:
    digits = "".join(ch for ch in label if ch.isdigit())
    return (label.startswith("GA"), int(digits) if digits else 0, label)


def collect_final_samples(
    results: Sequence[RunResult], objective: str, replicate_mode: str = "pool"
) -> Dict[str, np.ndarray]:
    """
    Final-generation samples per group.

    Args:
        results (Sequence[RunResult]): Finished runs.
        objective (str): "deviation" or "mae".
        replicate_mode (str): "pool" concatenates the final populations of all
            replicates; "replicate_means" keeps one population mean per replicate.

    Returns:
        Dict[str, np.ndarray]: Samples keyed by group label, in model order.
    """
    if replicate_mode not in REPLICATE_MODES:
        raise ValueError(f"replicate_mode must be one of {REPLICATE_MODES}")
    grouped: Dict[str, List[RunResult]] = {}
    for result in results:
        grouped.setdefault(result_label(result), []).append(result)

    samples: Dict[str, np.ndarray] = {}
    for label in sorted(grouped, key=_label_order):
        runs = sorted(grouped[label], key=lambda r: r.replicate)
        if replicate_mode == "pool":
            samples[label] = np.concatenate([r.final_values(objective) for r in runs])
        else:
            samples[label] = np.array([r.final_values(objective).mean() for r in runs])
    return samples


# --- Best model selection ---

@dataclass
class ModelComparison:
    """Per-objective reports plus the groups winning on both objectives."""
    reports: Dict[str, StatsReport]
    both_measures: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "objectives": {name: report.to_dict() for name, report in self.reports.items()},
            "both_measures": list(self.both_measures),
        }


def compare_samples(
    samples: Mapping[str, Mapping[str, Sequence[float]]], alpha: float = 0.05
) -> ModelComparison:
    """
    Runs ANOVA and Tukey per objective on ready-made samples.

    Args:
        samples (Mapping[str, Mapping[str, Sequence[float]]]): samples[objective][label].
        alpha (float): Significance level.

    Returns:
        ModelComparison: Independent of the order in which groups are given.
    """
    reports: Dict[str, StatsReport] = {}
    for objective, by_label in samples.items():
        sizes = {len(v) for v in by_label.values()}
        if len(sizes) > 1:
            logger.warning(f"{objective}: unequal sample sizes {sorted(sizes)}; using Tukey-Kramer")
        groups = [SampleGroup(label, np.asarray(values)) for label, values in by_label.items()]
        reports[objective] = compare_groups(groups, alpha, objective)

    both: List[str] = []
    if all(name in reports for name in OBJECTIVES):
        mae_winners = set(reports["mae"].winners)
        both = sorted(
            (label for label in reports["deviation"].winners if label in mae_winners),
            key=_label_order,
        )
    return ModelComparison(reports, both)


def compare_models(
    results: Sequence[RunResult], alpha: float = 0.05, replicate_mode: str = "pool"
) -> ModelComparison:
    """
    Best-model selection over finished runs of at least two models, for both
    objectives.

    Raises:
        DegenerateInputError: Fewer than two models or samples too small.
    """
    samples = {
        objective: collect_final_samples(results, objective, replicate_mode)
        for objective in OBJECTIVES
    }
    comparison = compare_samples(samples, alpha)
    logger.info(f"Models best on both objectives: {comparison.both_measures or 'none'}")
    return comparison


# --- Multi- vs single-objective ---

@dataclass(frozen=True)
class MultiVsSingleRow:
    model: str
    multi_mean: float
    single_mean: float
    t_statistic: float
    p_value: float
    df: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "multi_mean_mae": self.multi_mean,
            "single_mean_mae": self.single_mean,
            "t_statistic": self.t_statistic,
            "p_value": self.p_value,
            "df": self.df,
        }


def multi_vs_single_rows(
    results: Sequence[RunResult], replicate_mode: str = "pool"
) -> List[MultiVsSingleRow]:
    """Pairs each model with its deviation-only GA and t-tests the final MAE samples."""
    samples = collect_final_samples(results, "mae", replicate_mode)
    rows = []
    for label, multi in samples.items():
        single_label = f"GA ({label})"
        if label.startswith("GA") or single_label not in samples:
            continue
        single = samples[single_label]
        test = ttest_ind(SampleGroup(label, multi), SampleGroup(single_label, single))
        rows.append(MultiVsSingleRow(
            label, float(multi.mean()), float(single.mean()),
            float(test.t_statistic), float(test.p_value), int(test.df),
        ))
        logger.info(
            f"{label}: multi-objective MAE {multi.mean():.4f} vs single-objective "
            f"{single.mean():.4f}, p={test.p_value:.4g}"
        )
    return rows


def compare_multi_vs_single(
    config: ExperimentConfig,
    models: Optional[Sequence[int]] = None,
    dataset: Optional[Dataset] = None,
) -> List[MultiVsSingleRow]:
    """
    Runs each CM model next to the deviation-only GA with identical seeds and
    budget, then compares their final-generation MAE.

    Raises:
        ValueError: If a model outside 1-4 is requested.
    """
    if models is not None:
        config = replace(config, models=tuple(models))
    not_cm = [m for m in config.models if m not in CM_MODELS]
    if not_cm:
        raise ValueError(f"Only CM models {CM_MODELS} have a single-objective counterpart, got {not_cm}")
    outcome = run_baseline_pairs(config, dataset)
    return multi_vs_single_rows(outcome.results, config.replicate_mode)


# --- Text reports ---

def format_pairwise_table(report: StatsReport, precision: int = 4) -> str:
    """
    Tukey multiple comparisons for one objective: every ordered pair (I, J)
    with the mean difference I - J and its p-value.
    """
    rows = []
    for i, label_i in enumerate(report.labels):
        for j, label_j in enumerate(report.labels):
            if i != j:
                rows.append([label_i, label_j, report.means[i] - report.means[j], report.pairwise[i][j]])
    return format_table(["(I) Group", "(J) Group", "Mean difference (I-J)", "Sig."], rows, precision)


def format_comparison_table(comparison: ModelComparison, precision: int = 4) -> str:
    """
    One block per objective: ANOVA line, group means laid out in homogeneous
    subset columns, and the best group with its equivalents; then the groups
    best on both objectives.
    """
    blocks = []
    for objective, report in comparison.reports.items():
        title = OBJECTIVE_TITLES.get(objective, objective)
        headers = ["Group"] + [f"Subset {i + 1}" for i in range(len(report.subsets))]
        order = sorted(range(len(report.labels)), key=lambda i: (report.means[i], i))
        rows = []
        for i in order:
            label = report.labels[i]
            rows.append([label] + [
                report.means[i] if label in subset.labels else None for subset in report.subsets
            ])
        anova = report.anova
        blocks.append("\n".join([
            f"{title} (alpha = {report.alpha})",
            f"ANOVA: F = {anova.f_statistic:.{precision}f}, "
            f"df = ({anova.df_between}, {anova.df_within}), p = {anova.p_value:.{precision}g}",
            format_table(headers, rows, precision),
            format_pairwise_table(report, precision),
            f"Best: {report.best_group}; not significantly different: "
            f"{', '.join(report.best_equivalents) or 'none'}",
        ]))
    summary_rows = [[OBJECTIVE_TITLES.get(o, o), ", ".join(r.winners)] for o, r in comparison.reports.items()]
    summary_rows.append(["Both measures", ", ".join(comparison.both_measures) or "none"])
    blocks.append(format_table(["Objective", "Best performing"], summary_rows))
    return "\n\n".join(blocks)


def format_multi_vs_single_table(rows: Sequence[MultiVsSingleRow], precision: int = 4) -> str:
    """Model columns; rows for the multi-objective mean, single-objective mean and Sig."""
    headers = [""] + [row.model for row in rows]
    body = [
        ["Multi-objective mean MAE"] + [row.multi_mean for row in rows],
        ["Single-objective mean MAE"] + [row.single_mean for row in rows],
        ["Sig."] + [row.p_value for row in rows],
    ]
    return format_table(headers, body, precision)
