import logging
import sys
from typing import Optional

PACKAGE_LOGGER_NAME = "predictive_clusters"
LOG_FORMAT = "[Predictive Clusters] %(asctime)s - %(name)s - %(levelname)s - %(message)s"


class _PackageHandlerMarker:
    """Mixin used to recognise handlers installed by setup_logging."""


class PackageStreamHandler(_PackageHandlerMarker, logging.StreamHandler):
    """
    Stream handler for package log records.

    Always writes to the *current* sys.stderr so that redirected streams
    (pytest capture, CLI callers) receive the records. stdout stays reserved
    for reports.
    """

    def __init__(self) -> None:
        super().__init__(stream=sys.stderr)

    def emit(self, record: logging.LogRecord) -> None:
        self.stream = sys.stderr  # re-read each time, pytest swaps it per test
        try:
            super().emit(record)
        except Exception as e:
            # Last resort, a broken stream must never abort a run
            sys.__stderr__.write(f"Failed to emit log record: {e}\n")


class PackageFileHandler(_PackageHandlerMarker, logging.FileHandler):
    """File handler for --log-file."""


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """
    Configures logging for the predictive_clusters package.

    Call once per process (the CLI does it in main). Removes handlers installed
    by a previous call so repeated calls never duplicate messages, then installs
    a stderr handler and, optionally, a file handler.

    Args:
        level (str): Logging level name for the package logger.
        log_file (Optional[str]): Optional path of a log file to append to.

    Returns:
        logging.Logger: The configured package logger.
    """
    package_logger = logging.getLogger(PACKAGE_LOGGER_NAME)
    numeric_level = logging.getLevelName(str(level).upper())
    if not isinstance(numeric_level, int):  # unknown names come back as "Level X" strings
        numeric_level = logging.INFO
    package_logger.setLevel(numeric_level)

    # Only our own handlers are replaced; handlers added by the host application stay
    for handler in list(package_logger.handlers):
        if isinstance(handler, _PackageHandlerMarker):
            package_logger.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(LOG_FORMAT)
    stream_handler = PackageStreamHandler()
    stream_handler.setFormatter(formatter)
    package_logger.addHandler(stream_handler)

    if log_file:
        file_handler = PackageFileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(formatter)
        package_logger.addHandler(file_handler)

    # Records are fully handled here; the root logger would print them twice.
    package_logger.propagate = False
    package_logger.debug(f"Logging configured (level={level}, log_file={log_file}).")
    return package_logger
