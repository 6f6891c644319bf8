"""
Business logic layer for benchmark runs.
Turns a RunManifest into a partitioned graph, a vertex program and an engine
run, and records the resulting metrics.
"""

import hashlib
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from src.domain.graph import (
    PartitionedGraph, RawGraph, classify_vertices, partition_blocks, partition_hash
)
from src.domain.graph_io import generate_graph, load_graph, load_partition_map
from src.domain.models import AlgorithmName, MatchingProgramName, MetricsRecord, PartitionScheme, RunManifest
from src.domain.repository import MetricsRepositoryInterface
from src.algorithms.matching import HandshakeMatchingProgram, StandardMatchingProgram
from src.algorithms.pagerank import IncrementalPageRankProgram, PlainPageRankProgram
from src.algorithms.sssp import SsspProgram
from src.engine.executor import RunResult, run
from src.engine.program import VertexProgram

logger = logging.getLogger(__name__)


@dataclass
class RunOutcome:
    """Result of one manifest: always a record, the engine result when it ran."""
    record: MetricsRecord
    result: Optional[RunResult] = None
    error: Optional[str] = None

    @property
    def success(self) -> bool:
        return self.error is None and self.record.converged


def format_value(value: Any, graph: PartitionedGraph, algo: AlgorithmName) -> str:
    """Render a final vertex value the way dumps and checksums see it."""
    if algo is AlgorithmName.BM:
        return str(graph.original_ids[value]) if value is not None else "-1"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return repr(float(value))


def value_lines(values: Sequence[Any], graph: PartitionedGraph, algo: AlgorithmName) -> List[str]:
    """'vertexId value' lines keyed by input ids, in ascending input-id order."""
    return [f"{graph.original_ids[v]} {format_value(value, graph, algo)}" for v, value in enumerate(values)]


def values_checksum(lines: Sequence[str]) -> str:
    digest = hashlib.sha256()
    for line in lines:
        digest.update(line.encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


class BenchService:
    """Service layer for benchmark runs."""

    def __init__(self, repository: MetricsRepositoryInterface):
        """Initialize service with repository dependency."""
        self.repository = repository
        self.logger = logging.getLogger(__name__)

    def load_raw_graph(self, manifest: RunManifest) -> RawGraph:
        spec = manifest.generator_spec()
        if spec is not None:
            return generate_graph(spec)
        return load_graph(manifest.graph_path, manifest.graph_format, manifest.undirected)

    def build_graph(self, manifest: RunManifest, raw: Optional[RawGraph] = None) -> PartitionedGraph:
        """Load or generate the graph, partition it and classify its vertices."""
        raw = raw if raw is not None else self.load_raw_graph(manifest)
        if manifest.partition is PartitionScheme.FILE:
            partition_map = load_partition_map(manifest.partition_file, raw, manifest.k)
        elif manifest.partition is PartitionScheme.BLOCKS:
            partition_map = partition_blocks(raw, manifest.k)
        else:
            partition_map = partition_hash(raw, manifest.k)
        return classify_vertices(raw, partition_map)

    @staticmethod
    def build_program(manifest: RunManifest, raw: RawGraph) -> VertexProgram:
        if manifest.algo is AlgorithmName.SSSP:
            return SsspProgram(raw.dense_id(manifest.source))
        if manifest.algo is AlgorithmName.PAGERANK_INC:
            return IncrementalPageRankProgram(manifest.delta)
        if manifest.algo is AlgorithmName.PAGERANK_PLAIN:
            return PlainPageRankProgram(manifest.budget)
        if manifest.resolved_bm_program() is MatchingProgramName.STANDARD:
            return StandardMatchingProgram()
        return HandshakeMatchingProgram()

    def execute(self, manifest: RunManifest) -> RunOutcome:
        """Run a manifest without recording it."""
        raw = self.load_raw_graph(manifest)
        graph = self.build_graph(manifest, raw)
        program = self.build_program(manifest, raw)
        result = run(graph, program, manifest.to_engine_config())
        lines = value_lines(result.values, graph, manifest.algo)
        if manifest.dump_values:
            with open(manifest.dump_values, "w", encoding="utf-8", newline="\n") as f:
                f.writelines(line + "\n" for line in lines)
            self.logger.info(f"Wrote {len(lines)} values to {manifest.dump_values}")
        record = MetricsRecord.from_run(manifest, result.metrics, values_checksum(lines))
        return RunOutcome(record=record, result=result)

    def run(self, manifest: RunManifest) -> RunOutcome:
        """Execute and record one manifest; errors propagate to the caller."""
        try:
            self.logger.info(f"Processing {manifest.algo.value}/{manifest.engine.value} run {manifest.manifest_hash()}")
            outcome = self.execute(manifest)
            self.repository.append(outcome.record)
            self.repository.append_manifest(manifest)
            if not outcome.record.converged:
                self.logger.warning(f"Run {outcome.record.manifest_hash} did not converge")
            return outcome
        except Exception as e:
            self.logger.error(f"Error running manifest {manifest.manifest_hash()}: {e}")
            raise

    def run_suite(self, manifests: Sequence[RunManifest]) -> List[RunOutcome]:
        """Run manifests sequentially; a failing entry is recorded and the suite continues."""
        outcomes: List[RunOutcome] = []
        plot_rows: List[Dict[str, Any]] = []
        self.repository.ensure_header()
        for index, manifest in enumerate(manifests):
            try:
                outcome = self.execute(manifest)
            except Exception as e:
                self.logger.warning(f"Suite entry {index} ({manifest.manifest_hash()}) failed: {e}")
                outcome = RunOutcome(record=MetricsRecord.failed(manifest), error=str(e))
            self.repository.append(outcome.record)
            self.repository.append_manifest(manifest)
            outcomes.append(outcome)
            if outcome.error is None:
                plot_rows.append({
                    "algo": outcome.record.algo,
                    "engine": outcome.record.engine,
                    "k": outcome.record.k,
                    "delta": manifest.delta,
                    "iterations": outcome.record.iterations,
                    "remote_messages": outcome.record.remote_messages,
                    "pseudo_supersteps": outcome.record.pseudo_supersteps,
                })
        self.repository.write_plot(plot_rows)
        failed = sum(1 for o in outcomes if not o.success)
        self.logger.info(f"Suite finished: {len(outcomes)} runs, {failed} failed or unconverged")
        return outcomes

    def list_records(self) -> List[MetricsRecord]:
        return self.repository.list_records()

    def describe(self, manifest: RunManifest) -> Dict[str, Any]:
        """Partition statistics of the manifest's graph."""
        stats = self.build_graph(manifest).stats()
        return {
            "vertices": stats.vertices,
            "edges": stats.edges,
            "k": manifest.k,
            "partition": manifest.partition.value,
            "boundary_vertices": stats.boundary_vertices,
            "cut_edges": stats.cut_edges,
            "partition_sizes": list(stats.partition_sizes),
        }
