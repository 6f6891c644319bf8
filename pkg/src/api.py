"""
FastAPI application setup and routing.
"""

import logging

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from src.port.bench_port import BenchRouter

logger = logging.getLogger(__name__)

app = FastAPI(
    title="BSP Bench API",
    description="Runs vertex-centric graph algorithms on the standard, AM and hybrid engines",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(RequestValidationError)
async def validation_error_handler(request: Request, exc: RequestValidationError):
    """Invalid manifests are client errors."""
    logger.warning(f"Invalid request to {request.url.path}: {exc.errors()}")
    return JSONResponse(status_code=400, content={"error": "Invalid request", "detail": str(exc.errors())})


bench_router = BenchRouter()
app.include_router(bench_router.get_router())


@app.get("/")
async def root():
    return {"message": "BSP Bench API", "status": "running", "version": "1.0.0"}


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy"}
