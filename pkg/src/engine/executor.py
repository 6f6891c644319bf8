"""
Master loop.
Drives the partition workers through supersteps (standard, AM) or global
iterations (hybrid), runs the barrier and decides termination.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, TypeVar

from src.domain.errors import ConfigurationError
from src.domain.graph import PartitionedGraph
from src.domain.models import EngineConfig, EngineMode, RunMetrics, TerminationReport
from src.engine.messages import reduce_aggregates
from src.engine.program import VertexProgram
from src.engine.worker import PartitionWorker

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass
class RunResult:
    values: List[Any]
    metrics: RunMetrics
    aggregate: Optional[float] = None


def barrier_and_terminate(workers: Sequence[PartitionWorker], metrics: RunMetrics) -> TerminationReport:
    """Deliver combined rMsgs, reduce aggregates and report on quiescence.

    Runs only while no worker executes vertices.
    """
    delivered = 0
    for worker in workers:
        outgoing = worker.flush_remote()
        for msg in outgoing:
            workers[worker.graph.partition_of(msg.target)].deliver(msg)
        delivered += len(outgoing)
    metrics.remote_messages += delivered

    program = workers[0].program if workers else None
    if program is not None and program.aggregate_op is not None:
        submitted = [w.partition_aggregate() for w in workers]
        aggregate = reduce_aggregates((v for v in submitted if v is not None), program.aggregate_op)
        for worker in workers:
            worker.previous_aggregate = aggregate

    return TerminationReport(
        active_vertices=sum(w.active_count() for w in workers),
        in_transit=sum(w.queues.pending() for w in workers),
    )


class BspEngine:
    """One run of one program over one partitioned graph."""

    def __init__(self, graph: PartitionedGraph, program: VertexProgram, config: EngineConfig):
        if config.k != graph.k:
            raise ConfigurationError(f"Config expects {config.k} partitions, graph has {graph.k}")
        if program.engine_modes is not None and config.mode not in program.engine_modes:
            raise ConfigurationError(f"{program.name} cannot run on the {config.mode.value} engine")
        program.prepare(graph)
        self.graph = graph
        self.program = program
        self.config = config
        self.workers = [PartitionWorker(i, graph, program, config) for i in range(graph.k)]
        self.metrics = RunMetrics()
        self.logger = logging.getLogger(__name__)

    def _for_each_worker(self, pool: Optional[ThreadPoolExecutor], step: Callable[[PartitionWorker], T]) -> List[T]:
        if pool is None:
            return [step(worker) for worker in self.workers]
        return list(pool.map(step, self.workers))

    def _barrier(self, iteration: int) -> TerminationReport:
        report = barrier_and_terminate(self.workers, self.metrics)
        self.logger.debug(
            f"Iteration {iteration}: {report.active_vertices} active, {report.in_transit} in transit, "
            f"M={self.metrics.remote_messages}"
        )
        return report

    def _superstep_loop(self, pool: Optional[ThreadPoolExecutor], live: bool) -> bool:
        for superstep in range(self.config.max_iterations):
            # Superstep 0 initialises; its sends always wait for superstep 1
            step_live = live and superstep > 0
            self._for_each_worker(pool, lambda w: w.run_superstep(superstep, step_live))
            self.metrics.global_iterations = superstep + 1
            if self._barrier(superstep).terminated:
                return True
        return False

    def _hybrid_loop(self, pool: Optional[ThreadPoolExecutor]) -> bool:
        for iteration in range(self.config.max_iterations):
            if iteration == 0:
                self._for_each_worker(pool, lambda w: w.run_superstep(0))
                completed = [True]
            else:
                completed = self._for_each_worker(pool, lambda w: w.run_global_iteration(iteration))
            self.metrics.global_iterations = iteration + 1
            report = self._barrier(iteration)
            if not all(completed):
                return False
            if report.terminated:
                return True
        return False

    def run(self) -> RunResult:
        mode = self.config.mode
        self.logger.info(
            f"Running {self.program.name} on the {mode.value} engine: |V|={self.graph.num_vertices}, "
            f"k={self.graph.k}, boundary_participation={self.config.boundary_participation}, "
            f"async_local_messaging={self.config.async_local_messaging}, combiner={self.config.combiner_enabled}"
        )
        parallel = self.config.parallel and len(self.workers) > 1
        start = time.perf_counter()
        pool = ThreadPoolExecutor(max_workers=len(self.workers), thread_name_prefix="partition") if parallel else None
        try:
            if mode is EngineMode.HYBRID:
                converged = self._hybrid_loop(pool)
            else:
                converged = self._superstep_loop(pool, live=mode is EngineMode.AM)
        finally:
            if pool is not None:
                pool.shutdown(wait=True)
        self.metrics.wall_time = time.perf_counter() - start
        self.metrics.converged = converged
        self.metrics.pseudo_supersteps = sum(w.counters.pseudo_supersteps for w in self.workers)
        self.metrics.vertex_executions = sum(w.counters.vertex_executions for w in self.workers)
        self.metrics.local_phase_deliveries = sum(w.counters.local_phase_deliveries for w in self.workers)

        if converged:
            self.logger.info(
                f"{self.program.name}/{mode.value} finished: I={self.metrics.global_iterations}, "
                f"M={self.metrics.remote_messages}, pseudo-supersteps={self.metrics.pseudo_supersteps}, "
                f"T={self.metrics.wall_time:.3f}s"
            )
        else:
            self.logger.warning(
                f"{self.program.name}/{mode.value} did not converge after "
                f"{self.metrics.global_iterations} iterations; returning partial values"
            )
        return RunResult(
            values=self.values(),
            metrics=self.metrics,
            aggregate=self.workers[0].previous_aggregate if self.workers else None,
        )

    def values(self) -> List[Any]:
        values: List[Any] = [None] * self.graph.num_vertices
        for worker in self.workers:
            for vertex, state in worker.states.items():
                values[vertex] = self.program.output_value(state)
        return values


def _run_mode(expected: EngineMode, graph: PartitionedGraph, program: VertexProgram, config: EngineConfig) -> RunResult:
    if config.mode is not expected:
        raise ConfigurationError(f"run_{expected.value} called with mode {config.mode.value}")
    return BspEngine(graph, program, config).run()


def run_standard(graph: PartitionedGraph, program: VertexProgram, config: EngineConfig) -> RunResult:
    return _run_mode(EngineMode.STANDARD, graph, program, config)


def run_am(graph: PartitionedGraph, program: VertexProgram, config: EngineConfig) -> RunResult:
    return _run_mode(EngineMode.AM, graph, program, config)


def run_hybrid(graph: PartitionedGraph, program: VertexProgram, config: EngineConfig) -> RunResult:
    return _run_mode(EngineMode.HYBRID, graph, program, config)


def run(graph: PartitionedGraph, program: VertexProgram, config: EngineConfig) -> RunResult:
    """Dispatch on config.mode."""
    return BspEngine(graph, program, config).run()
