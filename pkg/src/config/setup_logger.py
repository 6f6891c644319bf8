"""
Logging setup for the bench.
The console handler writes to stderr because stdout carries the JSON metrics
records printed by the command line.
"""

import logging
import sys
from typing import Optional, TextIO

from src.config.settings import DEFAULT_LOG_FILE

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logger(
    level: int = logging.INFO,
    log_file: Optional[str] = DEFAULT_LOG_FILE,
    stream: TextIO = sys.stderr,
) -> None:
    """Configure the root logger once per process; safe to call again."""
    formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
        handler.close()

    console_handler = logging.StreamHandler(stream)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    # Per-iteration termination reports only reach the file
    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    for name in ("uvicorn", "fastapi"):
        logging.getLogger(name).setLevel(logging.INFO)
    logging.getLogger("src").setLevel(logging.DEBUG)

    logging.getLogger(__name__).debug(f"Logging configured: console level {logging.getLevelName(level)}, file {log_file}")
