import logging
import os
import sys
from typing import Optional

# Constants
LOG_FILE_NAME = "app.log"
LOG_FORMAT = "[%(asctime)s] | %(levelname)-8s | %(name)-15s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

_HANDLER_TAG = "_polytope_orderings_handler"


def setup_logger(
    name: str = "src",
    level: str = "WARNING",
    log_dir: Optional[str] = None,
) -> logging.Logger:
    """
    Configures and returns the toolkit logger.

    Features:
    - Console output on stderr (stdout carries JSON results only)
    - Optional file output, overwritten on each run
    - Standardized formatting

    Calling it again replaces the handlers it installed before, so tests
    and repeated CLI invocations in one process do not stack handlers.

    Args:
        name: Logger name; "src" covers every module of the package
        level: One of DEBUG, INFO, WARNING, ERROR
        log_dir: Directory for app.log, or None for console only

    Returns:
        Configured Logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper(), logging.WARNING))

    for handler in list(logger.handlers):
        if getattr(handler, _HANDLER_TAG, False):
            logger.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    # Resolved at call time so captured stderr in tests sees the output.
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    setattr(console_handler, _HANDLER_TAG, True)
    logger.addHandler(console_handler)

    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(os.path.join(log_dir, LOG_FILE_NAME), mode="w", encoding="utf-8")
        file_handler.setFormatter(formatter)
        setattr(file_handler, _HANDLER_TAG, True)
        logger.addHandler(file_handler)

    return logger
