"""
Wall-clock limits for long verification suites.
"""

import signal
from contextlib import contextmanager
from logging import getLogger

from cmfe_gelation.exceptions import CMFETimeoutError

LOG = getLogger(__name__)


@contextmanager
def wall_clock_limit(seconds: int, label: str = "block"):
    """
    Abort the code under ``with`` if it runs longer than ``seconds``.

    SIGALRM based, so it only works in the main thread. A non-positive
    ``seconds`` disables the limit.

    :param seconds: Max execution time in seconds.
    :type seconds: int
    :param label: Name used in the error message, e.g. a suite name.
    :type label: str
    :raise CMFETimeoutError: when the block runs past the limit.
    """
    if seconds <= 0:
        yield
        return

    def handler(signum, frame):
        """
        Signal handler for SIGALRM.

        :raise CMFETimeoutError: when the signal is received.
        """
        if signum or frame:
            pass
        raise CMFETimeoutError(f"{label} timed out after {seconds} seconds")

    original_handler = signal.signal(signal.SIGALRM, handler)
    LOG.debug("%s: wall-clock limit %d s", label, seconds)
    try:
        signal.alarm(int(seconds))
        yield
    finally:
        signal.alarm(0)
        signal.signal(signal.SIGALRM, original_handler)
