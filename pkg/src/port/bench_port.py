"""
FastAPI port layer for benchmark runs.
Handles HTTP requests and responses with error mapping onto status codes.
"""

import logging
from typing import List

from fastapi import APIRouter, Depends, HTTPException

from src.config.settings import DEFAULT_METRICS_PATH
from src.domain.errors import ConfigurationError, GraphFormatError
from src.domain.models import ErrorResponse, MetricsRecord, RunManifest
from src.domain.repository import CsvMetricsRepository
from src.service.bench_service import BenchService

logger = logging.getLogger(__name__)


def get_bench_service() -> BenchService:
    """Dependency injection for BenchService."""
    return BenchService(CsvMetricsRepository(DEFAULT_METRICS_PATH))


class BenchRouter:
    """FastAPI router for benchmark runs."""

    def __init__(self):
        self.router = APIRouter(
            prefix="/api/v1",
            tags=["bsp-bench"],
            responses={
                400: {"model": ErrorResponse, "description": "Bad Request"},
                404: {"model": ErrorResponse, "description": "Not Found"},
                500: {"model": ErrorResponse, "description": "Internal Server Error"},
            },
        )
        self._setup_routes()

    def get_router(self) -> APIRouter:
        return self.router

    def _setup_routes(self):

        @self.router.post(
            "/runs",
            response_model=MetricsRecord,
            summary="Execute a run",
            description="Run one manifest and append its metrics record",
        )
        def create_run(manifest: RunManifest, service: BenchService = Depends(get_bench_service)):
            # Output files are chosen by the server, not the client
            manifest = manifest.model_copy(update={"output": None, "dump_values": None})
            try:
                logger.info(f"Run request {manifest.algo.value}/{manifest.engine.value} k={manifest.k}")
                return service.run(manifest).record
            except FileNotFoundError as e:
                logger.warning(f"Run request names a missing file: {e}")
                raise HTTPException(status_code=404, detail=str(e))
            except (ConfigurationError, GraphFormatError) as e:
                logger.warning(f"Rejected run request: {e}")
                raise HTTPException(status_code=400, detail=str(e))
            except Exception as e:
                logger.error(f"Error executing run: {e}")
                raise HTTPException(status_code=500, detail="Internal server error while executing run")

        @self.router.get(
            "/runs",
            response_model=List[MetricsRecord],
            summary="List recorded runs",
        )
        def list_runs(service: BenchService = Depends(get_bench_service)):
            try:
                records = service.list_records()
                logger.info(f"Returning {len(records)} records")
                return records
            except Exception as e:
                logger.error(f"Error listing runs: {e}")
                raise HTTPException(status_code=500, detail="Internal server error while listing runs")
