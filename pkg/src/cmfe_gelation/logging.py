"""
Logging setup for CMFE Gelation runs.

Informational records go to stdout, warnings and errors go to stderr.
A run directory can additionally receive a full debug log.
"""

import logging
import sys
from typing import Optional

LOG_FORMAT = "%(asctime)s: %(levelname)s: %(name)s:%(module)s.%(funcName)s():%(lineno)d: %(message)s"


class LessThanFilter(logging.Filter):  # pylint: disable=too-few-public-methods
    """Passes only records strictly below a given level."""

    def __init__(self, exclusive_maximum, name=""):
        super().__init__(name)
        self.max_level = exclusive_maximum

    def filter(self, record):
        return 1 if record.levelno < self.max_level else 0


def add_file_handler(path: str, logger: Optional[logging.Logger] = None) -> logging.FileHandler:
    """
    Attach a DEBUG-level file handler, e.g. ``run.log`` in an output directory.

    :param path: Log file path. The file is truncated.
    :type path: str
    :param logger: Logger to attach to. Root logger by default.
    :type logger: logging.Logger
    :return: The handler, so the caller can detach it with :func:`remove_handler`.
    :rtype: logging.FileHandler
    """
    logger = logger or logging.getLogger()
    handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    return handler


def remove_handler(handler: logging.Handler, logger: Optional[logging.Logger] = None) -> None:
    """Detach and close a handler added by :func:`add_file_handler`."""
    logger = logger or logging.getLogger()
    logger.removeHandler(handler)
    handler.close()


def setup_logging(logger=None, debug=False, quiet=False, log_file=None):  # pragma: no cover
    """
    Configure console logging for the CLI and the test suite.

    :param logger: Logger to configure. Root logger by default.
    :param debug: Also print DEBUG records (per-record moments, cache traffic) to stderr.
    :type debug: bool
    :param quiet: Print errors only.
    :type quiet: bool
    :param log_file: Optional path of a file that receives every record.
    :type log_file: str
    """
    logger = logger or logging.getLogger()

    console_handler = logging.StreamHandler(stream=sys.stdout)
    console_handler.addFilter(LessThanFilter(logging.WARNING))
    console_handler.setLevel(logging.ERROR if quiet else logging.INFO)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    console_handler_err = logging.StreamHandler(stream=sys.stderr)
    console_handler_err.setLevel(logging.ERROR if quiet else logging.WARNING)
    console_handler_err.setFormatter(logging.Formatter(LOG_FORMAT))

    logger.handlers = []
    logger.addHandler(console_handler)
    logger.addHandler(console_handler_err)

    if debug:
        console_handler_debug = logging.StreamHandler(stream=sys.stderr)
        console_handler_debug.addFilter(LessThanFilter(logging.INFO))
        console_handler_debug.setLevel(logging.DEBUG)
        console_handler_debug.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(console_handler_debug)

    if log_file:
        add_file_handler(log_file, logger)

    logger.setLevel(logging.DEBUG)

    # diskcache is chatty at DEBUG
    logging.getLogger("diskcache").setLevel(logging.DEBUG if debug else logging.WARNING)
