import logging

from cmfe_gelation.logging import LessThanFilter, add_file_handler, remove_handler


def test_file_handler(tmpdir):
    """DEBUG records reach the run log until the handler is removed."""
    logger = logging.getLogger("cmfe_gelation.test_file_handler")
    logger.setLevel(logging.DEBUG)
    path = str(tmpdir.join("run.log"))

    handler = add_file_handler(path, logger)
    logger.debug("step %d", 7)
    remove_handler(handler, logger)
    logger.debug("after")

    with open(path, encoding="utf-8") as fp:
        text = fp.read()
    assert "DEBUG" in text
    assert "step 7" in text
    assert "after" not in text
    assert handler not in logger.handlers


def test_less_than_filter():
    """Records at or above the maximum are dropped."""
    log_filter = LessThanFilter(logging.WARNING)
    info = logging.LogRecord("x", logging.INFO, __file__, 1, "m", (), None)
    warning = logging.LogRecord("x", logging.WARNING, __file__, 1, "m", (), None)
    assert log_filter.filter(info)
    assert not log_filter.filter(warning)
