# test for logging setup
import io
import logging

import pytest

from src.config.setup_logger import setup_logger


@pytest.fixture
def root_handlers():
    root = logging.getLogger()
    saved, level = root.handlers[:], root.level
    yield root
    for handler in root.handlers[:]:
        root.removeHandler(handler)
        handler.close()
    for handler in saved:
        root.addHandler(handler)
    root.setLevel(level)


def test_console_and_file_handlers(root_handlers, tmp_path):
    stream = io.StringIO()
    log_file = tmp_path / "bench.log"
    setup_logger(log_file=str(log_file), stream=stream)

    logger = logging.getLogger("src.engine.executor")
    logger.debug("iteration 3: 0 active")
    logger.info("run finished")

    assert "run finished" in stream.getvalue()
    assert "iteration 3" not in stream.getvalue()
    text = log_file.read_text(encoding="utf-8")
    assert "iteration 3: 0 active" in text
    assert " - src.engine.executor - INFO - run finished" in text


def test_repeated_setup_does_not_duplicate_handlers(root_handlers):
    setup_logger(log_file=None, stream=io.StringIO())
    setup_logger(log_file=None, stream=io.StringIO())
    assert len(root_handlers.handlers) == 1
