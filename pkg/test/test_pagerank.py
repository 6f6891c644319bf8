# test for incremental and plain PageRank
import pytest

from src.algorithms.pagerank import IncrementalPageRankProgram, PlainPageRankProgram
from src.domain.errors import ConfigurationError
from src.domain.graph import RawGraph, classify_vertices, partition_blocks, partition_hash
from src.domain.graph_io import generate_graph
from src.domain.models import EngineConfig, EngineMode, GeneratorSpec
from src.engine.executor import run
from src.oracles.pagerank import max_relative_error, power_iteration


def _partitioned(raw, k=1):
    return classify_vertices(raw, partition_blocks(raw, k))


@pytest.fixture
def two_cycle():
    return _partitioned(RawGraph.from_edges(2, [(0, 1, 1.0), (1, 0, 1.0)]))


@pytest.mark.parametrize("mode", list(EngineMode))
def test_two_cycle_reaches_closed_form(two_cycle, mode):
    result = run(two_cycle, IncrementalPageRankProgram(1e-9), EngineConfig(mode=mode, tolerance=1e-9))
    assert result.values == [pytest.approx(1.0, abs=1e-6)] * 2


def test_isolated_vertices_converge_at_iteration_zero():
    graph = _partitioned(RawGraph.from_edges(3, []))
    result = run(graph, IncrementalPageRankProgram(1e-4), EngineConfig())
    assert result.values == [pytest.approx(0.15)] * 3
    assert result.metrics.global_iterations == 1
    # every vertex reports its 0.15 seed to the sum aggregator
    assert result.aggregate == pytest.approx(0.45)


@pytest.mark.parametrize("seed", range(20))
def test_incremental_matches_power_iteration(seed):
    raw = generate_graph(GeneratorSpec(kind="powerlaw", n=200, m=2, seed=seed))
    reference = power_iteration(raw, "unnormalized", 10_000)
    for k in (1, 4):
        graph = classify_vertices(raw, partition_hash(raw, k))
        for mode in EngineMode:
            result = run(graph, IncrementalPageRankProgram(1e-8), EngineConfig(mode=mode, k=k, parallel=False))
            assert max_relative_error(result.values, reference) <= 1e-4, f"{mode.value} k={k}"


def test_rank_minus_seed_equals_delivered_deltas():
    class Accounting(IncrementalPageRankProgram):
        def __init__(self, tolerance):
            super().__init__(tolerance)
            self.delivered = {}

        def compute(self, ctx, messages):
            if ctx.superstep > 0:
                self.delivered[ctx.vertex] = self.delivered.get(ctx.vertex, 0.0) + sum(m.payload for m in messages)
            super().compute(ctx, messages)

    raw = generate_graph(GeneratorSpec(kind="powerlaw", n=60, m=2, seed=9))
    graph = classify_vertices(raw, partition_blocks(raw, 3))
    program = Accounting(1e-6)
    result = run(graph, program, EngineConfig(mode=EngineMode.HYBRID, k=3))
    for vertex, value in enumerate(result.values):
        assert value - 0.15 == pytest.approx(program.delivered.get(vertex, 0.0), abs=1e-12)


def test_hybrid_needs_fewer_iterations_on_one_partition():
    raw = generate_graph(GeneratorSpec(kind="powerlaw", n=300, m=3, seed=2))
    graph = _partitioned(raw)
    standard = run(graph, IncrementalPageRankProgram(1e-3), EngineConfig(mode=EngineMode.STANDARD))
    hybrid = run(graph, IncrementalPageRankProgram(1e-3), EngineConfig(mode=EngineMode.HYBRID))
    assert hybrid.metrics.global_iterations == 2
    assert hybrid.metrics.global_iterations < standard.metrics.global_iterations


def test_hybrid_iterations_on_grid_blocks():
    raw = generate_graph(GeneratorSpec.parse("grid:32x32"))
    graph = _partitioned(raw, 4)
    for delta in (1e-2, 1e-3, 1e-4):
        counts = {
            mode: run(graph, IncrementalPageRankProgram(delta), EngineConfig(mode=mode, k=4)).metrics.global_iterations
            for mode in (EngineMode.STANDARD, EngineMode.HYBRID)
        }
        assert counts[EngineMode.HYBRID] <= counts[EngineMode.STANDARD]


def test_hybrid_gap_widens_as_tolerance_shrinks():
    raw = generate_graph(GeneratorSpec(kind="powerlaw", n=5000, m=3, seed=0))
    graph = _partitioned(raw, 8)
    gaps = []
    for delta in (1e-2, 1e-3, 1e-4):
        standard, hybrid = (
            run(graph, IncrementalPageRankProgram(delta), EngineConfig(mode=mode, k=8, tolerance=delta))
            .metrics.global_iterations
            for mode in (EngineMode.STANDARD, EngineMode.HYBRID)
        )
        assert hybrid < standard, f"delta={delta}"
        gaps.append(standard - hybrid)
    assert gaps == sorted(gaps)


def test_tolerance_must_be_positive():
    with pytest.raises(ConfigurationError):
        IncrementalPageRankProgram(0.0)


def test_plain_star_matches_normalized_power_iteration():
    raw = RawGraph.from_edges(5, [(0, t, 1.0) for t in range(1, 5)])
    reference = power_iteration(raw, "normalized", 30)
    result = run(_partitioned(raw), PlainPageRankProgram(30), EngineConfig())
    assert result.values == [pytest.approx(r, abs=1e-9) for r in reference]
    assert result.values[0] == pytest.approx(0.03)
    # one initialisation superstep plus 30 updates
    assert result.metrics.global_iterations == 31


@pytest.mark.parametrize("mode", list(EngineMode))
def test_plain_terminates_on_every_engine(mode):
    raw = generate_graph(GeneratorSpec(kind="powerlaw", n=80, m=2, seed=1))
    graph = _partitioned(raw, 4)
    config = EngineConfig(mode=mode, k=4, boundary_participation=False)
    result = run(graph, PlainPageRankProgram(5), config)
    assert result.metrics.converged
    assert all(value > 0 for value in result.values)


def test_plain_budget_must_be_positive():
    with pytest.raises(ConfigurationError):
        PlainPageRankProgram(0)
