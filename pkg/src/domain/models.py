"""
Pydantic models for engine configuration, run manifests and run metrics.
"""

import hashlib
import json
import re
from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config.settings import (
    DEFAULT_DELTA, DEFAULT_MAX_ITERATIONS, DEFAULT_PAGERANK_BUDGET, MANIFEST_HASH_LENGTH
)
from src.domain.errors import ConfigurationError


class EngineMode(str, Enum):
    STANDARD = "standard"
    AM = "am"
    HYBRID = "hybrid"


class AlgorithmName(str, Enum):
    SSSP = "sssp"
    PAGERANK_INC = "pagerank-inc"
    PAGERANK_PLAIN = "pagerank-plain"
    BM = "bm"


class GraphFormat(str, Enum):
    EDGELIST = "edgelist"
    DIMACS_GR = "dimacs-gr"
    SNAP = "snap"


class MatchingProgramName(str, Enum):
    STANDARD = "standard"
    HANDSHAKE = "handshake"


class PartitionScheme(str, Enum):
    HASH = "hash"
    BLOCKS = "blocks"
    FILE = "file"


class EngineConfig(BaseModel):
    """Configuration of a single engine run."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: EngineMode = Field(default=EngineMode.STANDARD, description="Execution model")
    k: int = Field(default=1, ge=1, description="Partition count")
    boundary_participation: bool = Field(
        default=True, description="Boundary vertices take part in local phases (hybrid only)"
    )
    async_local_messaging: bool = Field(
        default=False, description="Same-partition messages consumed within the same pseudo-superstep (hybrid only)"
    )
    combiner_enabled: bool = Field(default=True, description="Apply the program's combiners")
    rng_seed: int = Field(default=0, description="Seed of the per-vertex random generators")
    max_iterations: int = Field(default=DEFAULT_MAX_ITERATIONS, ge=1, description="Global iteration cap")
    tolerance: float = Field(default=DEFAULT_DELTA, gt=0, description="Convergence tolerance")
    parallel: bool = Field(default=True, description="One thread per partition; False runs workers round-robin")
    pseudo_superstep_cap: Optional[int] = Field(
        default=None, ge=1, description="Per-partition local phase cap; None derives it from the partition size"
    )


class RunMetrics(BaseModel):
    """Counters collected by the master loop."""
    global_iterations: int = Field(default=0, ge=0, description="Supersteps or global iterations executed")
    remote_messages: int = Field(default=0, ge=0, description="Cross-partition messages delivered after combining")
    pseudo_supersteps: int = Field(default=0, ge=0, description="Pseudo-supersteps summed over partitions")
    wall_time: float = Field(default=0.0, ge=0, description="Engine run time in seconds")
    converged: bool = Field(default=True, description="False when a cap aborted the run")
    vertex_executions: int = Field(default=0, ge=0, description="Compute invocations")
    local_phase_deliveries: int = Field(default=0, ge=0, description="Remote deliveries attempted inside a local phase")


class TerminationReport(BaseModel):
    """Barrier-time view of the whole computation."""
    active_vertices: int = Field(..., ge=0)
    in_transit: int = Field(..., ge=0)

    @property
    def terminated(self) -> bool:
        return self.active_vertices == 0 and self.in_transit == 0


class GeneratorSpec(BaseModel):
    """Synthetic graph description, e.g. ``grid:64x64`` or ``bipartite:100x100:0.05``."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["grid", "bipartite", "powerlaw", "random"]
    width: int = 0
    height: int = 0
    left: int = 0
    right: int = 0
    n: int = 0
    m: int = 0
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    max_weight: int = Field(default=1, ge=1)
    seed: int = 0

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "GeneratorSpec":
        """Parse the CLI spelling of a generator."""
        patterns = {
            "grid": r"grid:(\d+)x(\d+)",
            "bipartite": r"bipartite:(\d+)x(\d+):([0-9.eE+-]+)",
            "powerlaw": r"powerlaw:(\d+):(\d+)",
            "random": r"random:(\d+):([0-9.eE+-]+)(?::(\d+))?",
        }
        kind = text.split(":", 1)[0]
        pattern = patterns.get(kind)
        match = re.fullmatch(pattern, text.strip()) if pattern else None
        if not match:
            raise ConfigurationError(
                f"Unknown generator '{text}'; expected grid:WxH, bipartite:LxR:P, powerlaw:N:M or random:N:P[:MAXW]"
            )
        groups = match.groups()
        try:
            if kind == "grid":
                return cls(kind="grid", width=int(groups[0]), height=int(groups[1]), seed=seed)
            if kind == "bipartite":
                return cls(kind="bipartite", left=int(groups[0]), right=int(groups[1]), p=float(groups[2]), seed=seed)
            if kind == "powerlaw":
                return cls(kind="powerlaw", n=int(groups[0]), m=int(groups[1]), seed=seed)
            return cls(kind="random", n=int(groups[0]), p=float(groups[1]),
                       max_weight=int(groups[2] or 1), seed=seed)
        except ValueError as e:
            raise ConfigurationError(f"Invalid generator '{text}': {e}") from e

    def label(self) -> str:
        if self.kind == "grid":
            return f"grid:{self.width}x{self.height}"
        if self.kind == "bipartite":
            return f"bipartite:{self.left}x{self.right}:{self.p}"
        if self.kind == "powerlaw":
            return f"powerlaw:{self.n}:{self.m}"
        return f"random:{self.n}:{self.p}:{self.max_weight}"


class RunManifest(BaseModel):
    """Everything needed to reproduce one benchmark run."""
    model_config = ConfigDict(extra="forbid")

    algo: AlgorithmName = Field(..., description="Vertex program")
    engine: EngineMode = Field(..., description="Execution model")
    graph_path: Optional[str] = Field(None, description="Input graph file")
    graph_format: GraphFormat = Field(default=GraphFormat.EDGELIST, description="Input graph format")
    undirected: bool = Field(default=False, description="Expand edge-list lines into two directed edges")
    generator: Optional[str] = Field(None, description="Generator spec, e.g. grid:64x64")
    k: int = Field(default=1, ge=1, description="Partition count")
    partition: PartitionScheme = Field(default=PartitionScheme.HASH, description="Partitioning scheme")
    partition_file: Optional[str] = Field(None, description="External 'vertex partition' map")
    boundary_participation: Optional[bool] = Field(
        None, description="None uses the algorithm's recommendation"
    )
    async_local_messaging: bool = False
    combiner: bool = True
    delta: float = Field(default=DEFAULT_DELTA, gt=0, description="PageRank tolerance")
    source: Optional[int] = Field(None, description="SSSP source vertex (input id)")
    budget: int = Field(default=DEFAULT_PAGERANK_BUDGET, description="Plain PageRank update budget")
    bm_program: Optional[MatchingProgramName] = Field(
        None, description="Matching program; None picks standard on the standard engine, handshake elsewhere"
    )
    seed: int = 0
    max_iterations: int = Field(default=DEFAULT_MAX_ITERATIONS, ge=1)
    parallel: bool = True
    output: Optional[str] = Field(None, description="Metrics CSV path")
    dump_values: Optional[str] = Field(None, description="Write 'vertexId value' lines here")

    @field_validator("generator")
    @classmethod
    def validate_generator(cls, v):
        """Reject generator specs that do not parse."""
        if v is not None:
            GeneratorSpec.parse(v)
        return v

    @model_validator(mode="after")
    def validate_combination(self):
        if (self.graph_path is None) == (self.generator is None):
            raise ValueError("Exactly one of graph_path and generator is required")
        if self.algo is AlgorithmName.SSSP and self.source is None:
            raise ValueError("sssp requires a source vertex")
        if self.algo is AlgorithmName.PAGERANK_PLAIN and self.budget < 1:
            raise ValueError(f"pagerank-plain budget must be >= 1, got {self.budget}")
        if self.partition is PartitionScheme.FILE and not self.partition_file:
            raise ValueError("partition=file requires partition_file")
        if self.bm_program is not None and self.algo is not AlgorithmName.BM:
            raise ValueError(f"bm_program only applies to bm, not {self.algo.value}")
        if self.bm_program is MatchingProgramName.STANDARD and self.engine is EngineMode.HYBRID:
            raise ValueError("The standard matching program needs the standard or am engine")
        return self

    def generator_spec(self) -> Optional[GeneratorSpec]:
        return GeneratorSpec.parse(self.generator, seed=self.seed) if self.generator else None

    def resolved_boundary_participation(self) -> bool:
        if self.boundary_participation is not None:
            return self.boundary_participation
        # Plain PageRank needs last superstep's values from every neighbour
        return self.algo is not AlgorithmName.PAGERANK_PLAIN

    def resolved_bm_program(self) -> MatchingProgramName:
        if self.bm_program is not None:
            return self.bm_program
        if self.engine is EngineMode.STANDARD:
            return MatchingProgramName.STANDARD
        return MatchingProgramName.HANDSHAKE

    def to_engine_config(self) -> EngineConfig:
        return EngineConfig(
            mode=self.engine,
            k=self.k,
            boundary_participation=self.resolved_boundary_participation(),
            async_local_messaging=self.async_local_messaging,
            combiner_enabled=self.combiner,
            rng_seed=self.seed,
            max_iterations=self.max_iterations,
            tolerance=self.delta,
            parallel=self.parallel,
        )

    def canonical_json(self) -> str:
        """Stable JSON echo of the manifest; output paths are excluded."""
        data = self.model_dump(mode="json", exclude={"output", "dump_values"})
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def manifest_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()[:MANIFEST_HASH_LENGTH]


class MetricsRecord(BaseModel):
    """One CSV row per run."""
    manifest_hash: str
    algo: str
    engine: str
    k: int
    seed: int
    iterations: int
    remote_messages: int
    pseudo_supersteps: int
    time_s: float
    converged: bool
    values_checksum: str

    @classmethod
    def from_run(cls, manifest: RunManifest, metrics: RunMetrics, checksum: str):
        """Create a record from a manifest and the metrics of its run."""
        return cls(
            manifest_hash=manifest.manifest_hash(),
            algo=manifest.algo.value,
            engine=manifest.engine.value,
            k=manifest.k,
            seed=manifest.seed,
            iterations=metrics.global_iterations,
            remote_messages=metrics.remote_messages,
            pseudo_supersteps=metrics.pseudo_supersteps,
            time_s=round(metrics.wall_time, 6),
            converged=metrics.converged,
            values_checksum=checksum,
        )

    @classmethod
    def failed(cls, manifest: RunManifest):
        """Record for a run that raised before producing metrics."""
        return cls(
            manifest_hash=manifest.manifest_hash(), algo=manifest.algo.value, engine=manifest.engine.value,
            k=manifest.k, seed=manifest.seed, iterations=0, remote_messages=0, pseudo_supersteps=0,
            time_s=0.0, converged=False, values_checksum="",
        )


class ErrorResponse(BaseModel):
    """Error response model."""
    error: str = Field(..., description="Error message")
    detail: Optional[str] = Field(None, description="Detailed error information")
