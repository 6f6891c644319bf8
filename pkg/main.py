"""
Main entry point for the BSP benchmark CLI.
"""

import sys

from src.config.setup_logger import setup_logger
from src.port.cli import main

if __name__ == "__main__":
    setup_logger()
    sys.exit(main())
