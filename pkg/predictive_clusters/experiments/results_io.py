"""
Reading and writing run artifacts: generations.csv, final_population.csv and
result.json per run, manifest.json per experiment.
"""
import glob
import json
import logging
import os
from dataclasses import asdict
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from ..evolution.run_types import FINAL_POPULATION_COLUMNS, GENERATION_COLUMNS, RunResult

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
RESULT_FILE = "result.json"
GENERATIONS_FILE = "generations.csv"
FINAL_POPULATION_FILE = "final_population.csv"
COMPARISON_FILE = "comparison.json"
FLOAT_FORMAT = "%.17g"


def run_dir_name(model_id: int, replicate: int, algorithm: str = "NSGA-II") -> str:
    prefix = "soga" if algorithm == "SOGA" else "run"
    return f"{prefix}_{model_id}_{replicate}"


def write_json(data: Dict[str, Any], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        logger.error(f"Cannot parse {path}: {e}")
        raise ValueError(f"Cannot parse {path}: {e}") from e


def write_run_result(
    result: RunResult, run_dir: str, extra: Optional[Dict[str, Any]] = None
) -> str:
    """
    Writes the three per-run files. CSV floats keep full precision so repeated
    runs with the same seed produce identical bytes; timing lives under the
    "timing" key of result.json only.

    Returns:
        str: Path of result.json.
    """
    os.makedirs(run_dir, exist_ok=True)
    generations = pd.DataFrame([asdict(row) for row in result.generations], columns=list(GENERATION_COLUMNS))
    generations.to_csv(os.path.join(run_dir, GENERATIONS_FILE), index=False, float_format=FLOAT_FORMAT)
    final = pd.DataFrame(result.final_rows(), columns=list(FINAL_POPULATION_COLUMNS))
    final.to_csv(os.path.join(run_dir, FINAL_POPULATION_FILE), index=False, float_format=FLOAT_FORMAT)

    data = result.to_dict()
    data["timing"]["finished_at"] = datetime.now(timezone.utc).isoformat()
    data.update(extra or {})
    path = os.path.join(run_dir, RESULT_FILE)
    write_json(data, path)
    logger.debug(f"Wrote run artifacts to {run_dir}")
    return path


def read_run_result(path: str) -> RunResult:
    """Loads a RunResult from a result.json file or a run directory."""
    if os.path.isdir(path):
        path = os.path.join(path, RESULT_FILE)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"No result file at {path}")
    return RunResult.from_dict(read_json(path))


def read_generations(run_dir: str) -> pd.DataFrame:
    return pd.read_csv(os.path.join(run_dir, GENERATIONS_FILE), float_precision="round_trip")


def _result_files(path: str) -> List[str]:
    if os.path.isfile(path):
        return [path]
    if not os.path.isdir(path):
        raise FileNotFoundError(f"Result path does not exist: {path}")
    if os.path.isfile(os.path.join(path, RESULT_FILE)):
        return [os.path.join(path, RESULT_FILE)]
    manifest_path = os.path.join(path, MANIFEST_FILE)
    if os.path.isfile(manifest_path):
        manifest = read_json(manifest_path)
        files = []
        for entry in manifest.get("runs", []):
            if entry.get("status") != "ok":
                logger.warning(f"Skipping failed run {entry.get('run_dir')}: {entry.get('error')}")
                continue
            files.append(os.path.join(path, entry["run_dir"], RESULT_FILE))
        return files
    return sorted(glob.glob(os.path.join(path, "*", RESULT_FILE)))


def load_run_results(paths: Sequence[str]) -> List[RunResult]:
    """
    Reads RunResults from result.json files, run directories, or experiment
    directories (through their manifest, or every */result.json without one).

    Raises:
        FileNotFoundError: If a path does not exist or holds no results.
    """
    results: List[RunResult] = []
    for path in paths:
        files = _result_files(path)
        if not files:
            raise FileNotFoundError(f"No result files found under {path}")
        results.extend(read_run_result(f) for f in files)
    logger.info(f"Loaded {len(results)} run results from {len(paths)} path(s).")
    return results


def find_run_dirs(path: str) -> List[str]:
    """Directories holding a generations.csv: the path itself or its children."""
    if os.path.isfile(os.path.join(path, GENERATIONS_FILE)):
        return [path]
    return sorted(os.path.dirname(p) for p in glob.glob(os.path.join(path, "*", GENERATIONS_FILE)))
