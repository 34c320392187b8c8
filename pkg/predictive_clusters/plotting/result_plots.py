"""
Builds the standard plots of finished runs: objective trajectories per
generation and box plots of final-population objectives per model.
"""
import logging
import os
from typing import List, Sequence, Tuple

from ..experiments.comparisons import collect_final_samples, result_label
from ..experiments.results_io import find_run_dirs, read_generations, read_run_result
from ..evolution.run_types import RunResult
from .svg_charts import LinePanel, Series, box_plot_svg, line_chart_svg, write_svg

logger = logging.getLogger(__name__)

TRAJECTORY_FILE = "trajectories.svg"
DISTRIBUTION_FILE = "final_distributions.svg"


def _run_label(result: RunResult, with_replicate: bool) -> str:
    label = result_label(result)
    return f"{label} rep {result.replicate}" if with_replicate else label


def trajectory_panels(run_dirs: Sequence[str]) -> List[LinePanel]:
    """
    Deviation and MAE panels; each run contributes its per-generation mean
    (solid) and minimum (dashed), read straight from generations.csv.
    """
    runs: List[Tuple[RunResult, str]] = [(read_run_result(d), d) for d in run_dirs]
    with_replicate = any(result.replicate > 0 for result, _ in runs)
    panels = [
        LinePanel("Average deviation per generation", "Generation", "Deviation"),
        LinePanel("Average MAE per generation", "Generation", "MAE"),
    ]
    for i, (result, run_dir) in enumerate(runs):
        frame = read_generations(run_dir)
        label = _run_label(result, with_replicate)
        generations = frame["generation"].tolist()
        for panel, column in zip(panels, ("deviation", "mae")):
            color = f"C{i % 10}"
            panel.series.append(Series(f"{label} mean", generations, frame[f"mean_{column}"].tolist(), color=color))
            panel.series.append(
                Series(f"{label} min", generations, frame[f"min_{column}"].tolist(), dashed=True, color=color)
            )
    return panels


def distribution_panels(results: Sequence[RunResult]) -> List[Tuple[str, str, List[Tuple[str, list]]]]:
    panels = []
    for objective, title in (("deviation", "Deviation"), ("mae", "MAE")):
        samples = collect_final_samples(results, objective, "pool")
        groups = [(label, values.tolist()) for label, values in samples.items()]
        panels.append((f"Final-generation {title}", title, groups))
    return panels


def make_plots(in_path: str, out_dir: str) -> List[str]:
    """
    Writes trajectories.svg and final_distributions.svg for a run directory or
    an experiment directory.

    Args:
        in_path (str): A run directory or a directory of run directories.
        out_dir (str): Destination, created when missing.

    Returns:
        List[str]: Paths of the written files.

    Raises:
        FileNotFoundError: If no run directory is found under in_path.
    """
    run_dirs = find_run_dirs(in_path)
    if not run_dirs:
        logger.error(f"No run directories (with generations.csv) under {in_path}")
        raise FileNotFoundError(f"No run results found under {in_path}")
    os.makedirs(out_dir, exist_ok=True)
    logger.info(f"Plotting {len(run_dirs)} run(s) from {in_path}")

    trajectory_path = os.path.join(out_dir, TRAJECTORY_FILE)
    write_svg(line_chart_svg(trajectory_panels(run_dirs), "Objective trajectories"), trajectory_path)

    results = [read_run_result(d) for d in run_dirs]
    distribution_path = os.path.join(out_dir, DISTRIBUTION_FILE)
    write_svg(box_plot_svg(distribution_panels(results), "Final-generation objectives"), distribution_path)
    return [trajectory_path, distribution_path]
