# Expose utility functions for easier import
from .config_manager import ConfigError, DEFAULTS, load_config, resolve_settings
from .console_io import format_table, safe_print
from .logging_utils import setup_logging

__all__ = [
    'ConfigError',
    'DEFAULTS',
    'load_config',
    'resolve_settings',
    'format_table',
    'safe_print',
    'setup_logging',
]
