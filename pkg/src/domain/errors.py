"""
Domain exceptions.
"""

from typing import Optional


class BspError(Exception):
    """Base class for engine and bench errors."""


class ConfigurationError(BspError, ValueError):
    """Invalid engine, manifest or generator configuration."""


class GraphFormatError(BspError, ValueError):
    """Input file does not parse under its declared format."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        self.path = path
        self.line_number = line_number
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        elif line_number is not None:
            location = f"line {line_number}: "
        super().__init__(f"{location}{message}")


class PartitionMapError(GraphFormatError):
    """Partition map is not total or names an out-of-range partition."""


class ProtocolError(BspError, RuntimeError):
    """A vertex program broke its own message protocol."""
