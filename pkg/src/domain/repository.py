"""
Metrics repositories.
Persists benchmark metrics: the append-only CSV, its plot-data companion and
the manifest echo.
"""

import csv
import logging
import os
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence

from src.config.settings import MANIFEST_SUFFIX, PLOT_SUFFIX
from src.domain.models import MetricsRecord, RunManifest
from src.record_schema import CSV_COLUMNS, PLOT_COLUMNS

logger = logging.getLogger(__name__)


class MetricsRepositoryInterface(ABC):
    """Abstract repository for run metrics."""

    @abstractmethod
    def ensure_header(self) -> None:
        """Create the metrics file with its header row if it is missing or empty."""
        pass

    @abstractmethod
    def append(self, record: MetricsRecord) -> None:
        """Append one run record."""
        pass

    @abstractmethod
    def list_records(self) -> List[MetricsRecord]:
        """All records in insertion order."""
        pass

    @abstractmethod
    def append_manifest(self, manifest: RunManifest) -> None:
        """Echo the manifest that produced a record."""
        pass

    @abstractmethod
    def write_plot(self, rows: Sequence[Dict[str, Any]]) -> None:
        """Replace the plot-data companion with `rows`."""
        pass


def _companion(path: str, suffix: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root if ext == '.csv' else path}{suffix}"


class CsvMetricsRepository(MetricsRepositoryInterface):
    """CSV implementation; companions live next to the metrics file."""

    def __init__(self, path: str):
        self.path = path
        self.plot_path = _companion(path, PLOT_SUFFIX)
        self.manifest_path = _companion(path, MANIFEST_SUFFIX)

    def _needs_header(self) -> bool:
        return not os.path.exists(self.path) or os.path.getsize(self.path) == 0

    def ensure_header(self) -> None:
        try:
            if self._needs_header():
                with open(self.path, "a", encoding="utf-8", newline="") as f:
                    csv.DictWriter(f, fieldnames=CSV_COLUMNS).writeheader()
                logger.info(f"Created metrics file {self.path}")
        except OSError as e:
            logger.error(f"Error writing metrics to {self.path}: {e}")
            raise

    def append(self, record: MetricsRecord) -> None:
        try:
            new_file = self._needs_header()
            with open(self.path, "a", encoding="utf-8", newline="") as f:
                writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
                if new_file:
                    writer.writeheader()
                row = record.model_dump()
                row["converged"] = str(record.converged).lower()
                writer.writerow(row)
            logger.info(f"Recorded run {record.manifest_hash} in {self.path}")
        except OSError as e:
            logger.error(f"Error writing metrics to {self.path}: {e}")
            raise

    def list_records(self) -> List[MetricsRecord]:
        if not os.path.exists(self.path):
            return []
        try:
            with open(self.path, "r", encoding="utf-8", newline="") as f:
                records = [MetricsRecord(**row) for row in csv.DictReader(f)]
            logger.info(f"Retrieved {len(records)} records from {self.path}")
            return records
        except OSError as e:
            logger.error(f"Error reading metrics from {self.path}: {e}")
            raise

    def append_manifest(self, manifest: RunManifest) -> None:
        with open(self.manifest_path, "a", encoding="utf-8", newline="\n") as f:
            f.write(manifest.canonical_json() + "\n")

    def write_plot(self, rows: Sequence[Dict[str, Any]]) -> None:
        with open(self.plot_path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=PLOT_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
        logger.info(f"Wrote {len(rows)} plot rows to {self.plot_path}")
