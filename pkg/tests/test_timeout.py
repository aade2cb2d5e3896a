import time

import pytest

from cmfe_gelation.exceptions import CMFETimeoutError
from cmfe_gelation.timeout import wall_clock_limit


def test_timeout_expires():
    """A block running past its limit raises."""
    with pytest.raises(CMFETimeoutError, match="slow suite timed out after 1 seconds"):
        with wall_clock_limit(1, label="slow suite"):
            time.sleep(2)


def test_timeout_not_reached():
    """A fast block is left alone."""
    with wall_clock_limit(5):
        pass


def test_timeout_disabled():
    """A non-positive limit disables the alarm."""
    with wall_clock_limit(0):
        time.sleep(0.01)
