"""
Layered configuration: explicit overrides > JSON config file > environment (.env)
> built-in defaults.
"""
import json
import logging
import os
from typing import Any, Dict, Optional

from dotenv import find_dotenv, load_dotenv

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "predclusters.json"
SEED_ENV_VAR = "PREDCLUSTERS_SEED"

# Search defaults plus the harness settings.
DEFAULTS: Dict[str, Any] = {
    "population_size": 100,
    "iterations": 100,
    "crossover_pct": 90.0,
    "mutation_pct": 3.0,
    "sgd_c_gamma": 2000.0,
    "sgd_c_alpha": 1.0,
    "sgd_alpha": 0.75,
    "seed": 0,
    "target": "last",
    "normalize": "none",
    "replicates": 1,
    "replicate_mode": "pool",
    "min_cluster_size": 0,
    "jobs": 1,
    "alpha": 0.05,
}

_config_cache: Dict[str, Dict[str, Any]] = {}  # keyed by absolute path


class ConfigError(ValueError):
    """Raised when a config file exists but cannot be used."""


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Loads a JSON config file and caches the result per path.

    A missing file yields an empty configuration (with a warning when the path
    was given explicitly). Invalid JSON or a non-object top level raises
    ConfigError.

    Args:
        config_path (Optional[str]): Path to the file; defaults to
            ./predclusters.json.

    Returns:
        Dict[str, Any]: The parsed configuration (possibly empty).

    Raises:
        ConfigError: If the file cannot be parsed.
    """
    explicit = config_path is not None  # only an explicitly named file warns when missing
    path = os.path.abspath(config_path or DEFAULT_CONFIG_FILE)
    if path in _config_cache:
        logger.debug(f"Returning cached config for {path}.")
        return _config_cache[path]

    logger.debug(f"Attempting to load config from: {path}")
    config_data: Dict[str, Any] = {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            config_data = json.load(f)
    except FileNotFoundError:
        if explicit:
            logger.warning(f"Config file not found at: {path}. Using defaults.")
        else:
            logger.debug(f"No config file at {path}. Using defaults.")
    except json.JSONDecodeError as e:
        logger.error(f"Error decoding config file at {path}: {e}")
        raise ConfigError(f"Invalid JSON in config file {path}: {e}") from e

    # A list or scalar at the top level is valid JSON but not a config
    if not isinstance(config_data, dict):
        raise ConfigError(f"Config file {path} must contain a JSON object.")
    unknown = sorted(set(config_data) - set(DEFAULTS))
    if unknown:
        logger.warning(f"Ignoring unknown config keys in {path}: {unknown}")
        config_data = {k: v for k, v in config_data.items() if k in DEFAULTS}
    if config_data:
        logger.info(f"Config loaded from {path} ({len(config_data)} keys).")
    _config_cache[path] = config_data
    return config_data


def clear_config_cache() -> None:
    """Forgets every cached config file (tests and long-lived callers)."""
    _config_cache.clear()


def env_seed() -> Optional[int]:
    """
    Reads the fallback seed from the environment, loading a .env file first.

    Returns:
        Optional[int]: The seed, or None when unset or not an integer.
    """
    # Search from the working directory, not from this module's location;
    # variables already set in the process environment win over the file.
    load_dotenv(find_dotenv(usecwd=True), override=False)
    raw = os.getenv(SEED_ENV_VAR)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw.strip())
    except ValueError:
        logger.warning(f"Ignoring non-integer {SEED_ENV_VAR}={raw!r}.")
        return None


def resolve_settings(
    overrides: Optional[Dict[str, Any]] = None, config_path: Optional[str] = None
) -> Dict[str, Any]:
    """
    Merges overrides, config file, environment and defaults into one dict.

    Override values of None count as "not given". The seed falls back to
    PREDCLUSTERS_SEED before the built-in default.

    Args:
        overrides (Optional[Dict[str, Any]]): Explicit values (usually CLI flags).
        config_path (Optional[str]): Config file path passed to load_config.

    Returns:
        Dict[str, Any]: A complete settings dict with every DEFAULTS key.
    """
    file_config = load_config(config_path)
    # argparse leaves unset flags as None
    given = {k: v for k, v in (overrides or {}).items() if v is not None}

    settings: Dict[str, Any] = {}
    for key, default in DEFAULTS.items():
        if key in given:
            settings[key] = given[key]
        elif key in file_config:
            settings[key] = file_config[key]
        # Only the seed has an environment fallback
        elif key == "seed" and env_seed() is not None:
            settings[key] = env_seed()
            logger.info(f"Using seed from {SEED_ENV_VAR}.")
        else:
            settings[key] = default
    # Keep extra override keys (not in DEFAULTS) for callers that pass them
    for key, value in given.items():
        settings.setdefault(key, value)
    return settings
