# test for bipartite maximal matching
from collections import defaultdict

import pytest

from src.algorithms.matching import HandshakeMatchingProgram, StandardMatchingProgram
from src.domain.errors import ConfigurationError
from src.domain.graph import RawGraph, Side, classify_vertices, partition_blocks
from src.domain.graph_io import generate_graph
from src.domain.models import EngineConfig, EngineMode, GeneratorSpec
from src.engine.executor import run
from src.engine.messages import MatchToken, Phase
from src.oracles.matching import check_matching

L, R = Side.LEFT, Side.RIGHT


def _bipartite(seed, k=1):
    raw = generate_graph(GeneratorSpec(kind="bipartite", left=100, right=100, p=0.05, seed=seed))
    return classify_vertices(raw, partition_blocks(raw, k))


def _small(sides, pairs, k):
    """Undirected bipartite graph from (left, right) pairs, split into k id blocks."""
    edges = [e for u, v in pairs for e in ((u, v, 1.0), (v, u, 1.0))]
    raw = RawGraph.from_edges(len(sides), edges, sides=sides)
    return classify_vertices(raw, partition_blocks(raw, k))


@pytest.mark.parametrize("seed", range(50))
@pytest.mark.parametrize("mode", [EngineMode.STANDARD, EngineMode.AM])
def test_standard_program_finds_maximal_matching(seed, mode):
    graph = _bipartite(seed, k=8)
    result = run(graph, StandardMatchingProgram(), EngineConfig(mode=mode, k=8, rng_seed=seed))
    check = check_matching(graph, result.values)
    assert check.valid and check.maximal, check.violation
    assert result.metrics.converged


@pytest.mark.parametrize("seed", range(50))
@pytest.mark.parametrize("mode", list(EngineMode))
def test_handshake_program_finds_maximal_matching(seed, mode):
    for k in (1, 8):
        graph = _bipartite(seed, k=k)
        result = run(graph, HandshakeMatchingProgram(), EngineConfig(mode=mode, k=k, rng_seed=seed))
        check = check_matching(graph, result.values)
        assert check.valid and check.maximal, f"k={k}: {check.violation}"
        assert result.metrics.converged


def test_hybrid_needs_no_more_iterations_than_standard_on_most_seeds():
    no_worse = 0
    for seed in range(50):
        graph = _bipartite(seed, k=8)
        standard = run(graph, StandardMatchingProgram(), EngineConfig(mode=EngineMode.STANDARD, k=8, rng_seed=seed))
        hybrid = run(graph, HandshakeMatchingProgram(), EngineConfig(mode=EngineMode.HYBRID, k=8, rng_seed=seed))
        no_worse += hybrid.metrics.global_iterations <= standard.metrics.global_iterations
    assert no_worse >= 45


@pytest.mark.parametrize("seed", range(5))
def test_hybrid_on_one_partition_finishes_in_one_local_phase(seed):
    graph = _bipartite(seed, k=1)
    standard = run(graph, StandardMatchingProgram(), EngineConfig(mode=EngineMode.STANDARD, rng_seed=seed))
    hybrid = run(graph, HandshakeMatchingProgram(), EngineConfig(mode=EngineMode.HYBRID, rng_seed=seed))
    assert hybrid.metrics.global_iterations == 2
    assert hybrid.metrics.global_iterations < standard.metrics.global_iterations


def test_denied_boundary_left_vertex_requests_again_in_local_phase():
    class PhaseLog(HandshakeMatchingProgram):
        def __init__(self):
            self.log = []

        def compute(self, ctx, messages):
            super().compute(ctx, messages)
            self.log.append((ctx.vertex, ctx.superstep, ctx.phase, ctx.pseudo_superstep, ctx.halted))

    # left 0 and 1 in partition 0 compete for right 2 in partition 1
    graph = _small([L, L, R], [(0, 2), (1, 2)], k=2)
    program = PhaseLog()
    result = run(graph, program, EngineConfig(mode=EngineMode.HYBRID, k=2, parallel=False))

    assert result.metrics.converged
    assert check_matching(graph, result.values).maximal
    winner = result.values[2]
    loser = 1 - winner
    assert result.values[winner] == 2
    assert result.values[loser] is None
    # denied in the global phase: stays active, then requests from the local phase and halts
    assert (loser, 2, Phase.GLOBAL, 0, False) in program.log
    assert (loser, 2, Phase.LOCAL, 0, True) in program.log
    local = [pseudo for _, iteration, phase, pseudo, _ in program.log if iteration == 2 and phase is Phase.LOCAL]
    assert max(local) <= 1
    assert result.metrics.global_iterations == 4


def test_granted_right_vertex_holds_local_requests():
    class DenyWhileGranted(HandshakeMatchingProgram):
        def _holds_requests(self, ctx):
            return False

    # left 0 and right 1 share partition 0; left 2 sits alone in partition 1
    graph = _small([L, R, L], [(0, 1), (2, 1)], k=2)
    denying, holding = [], []
    for seed in range(20):
        config = EngineConfig(mode=EngineMode.HYBRID, k=2, rng_seed=seed, pseudo_superstep_cap=50, parallel=False)
        denying.append(run(graph, DenyWhileGranted(), config).metrics.converged)
        result = run(graph, HandshakeMatchingProgram(), config)
        holding.append(result.metrics.converged)
        assert check_matching(graph, result.values).maximal
    # whenever right 1 grants the remote left vertex first, request and deny ping-pong until the cap
    assert not all(denying)
    assert all(holding)


def test_granted_right_vertex_never_grants_twice():
    class Audited(HandshakeMatchingProgram):
        def __init__(self):
            self.outstanding = defaultdict(int)
            self.max_outstanding = 0

        def compute(self, ctx, messages):
            if ctx.side is Side.RIGHT:
                self.outstanding[ctx.vertex] -= sum(
                    1 for m in messages if m.payload in (MatchToken.ACCEPT, MatchToken.DENY)
                )
            super().compute(ctx, messages)

        def _grant(self, ctx, state, left):
            self.outstanding[ctx.vertex] += 1
            self.max_outstanding = max(self.max_outstanding, self.outstanding[ctx.vertex])
            super()._grant(ctx, state, left)

    for mode in EngineMode:
        graph = _bipartite(3, k=8)
        program = Audited()
        run(graph, program, EngineConfig(mode=mode, k=8, rng_seed=3, parallel=False))
        assert program.max_outstanding == 1
        assert all(count == 0 for count in program.outstanding.values())


PROGRAMS_BY_ENGINE = [
    (EngineMode.STANDARD, StandardMatchingProgram),
    (EngineMode.AM, StandardMatchingProgram),
    (EngineMode.STANDARD, HandshakeMatchingProgram),
    (EngineMode.AM, HandshakeMatchingProgram),
    (EngineMode.HYBRID, HandshakeMatchingProgram),
]


@pytest.mark.parametrize("mode,program_type", PROGRAMS_BY_ENGINE)
@pytest.mark.parametrize("k", [1, 2])
def test_single_edge_is_matched(mode, program_type, k):
    graph = _small([L, R], [(0, 1)], k=k)
    result = run(graph, program_type(), EngineConfig(mode=mode, k=k))
    assert result.values == [1, 0]
    assert result.metrics.converged


@pytest.mark.parametrize("mode,program_type", PROGRAMS_BY_ENGINE)
def test_two_left_vertices_one_right_vertex(mode, program_type):
    graph = _small([L, L, R], [(0, 2), (1, 2)], k=1)
    result = run(graph, program_type(), EngineConfig(mode=mode))
    assert result.metrics.converged
    assert result.values[2] in (0, 1)
    assert result.values[result.values[2]] == 2
    assert result.values[1 - result.values[2]] is None


def test_standard_program_stashes_early_acceptance_under_am():
    # right 1 consumes the accept in the superstep it is sent, one stage early
    graph = _small([L, R], [(0, 1)], k=1)
    result = run(graph, StandardMatchingProgram(), EngineConfig(mode=EngineMode.AM))
    assert result.values == [1, 0]
    assert result.metrics.global_iterations == 4


def test_standard_program_is_rejected_on_hybrid_engine():
    graph = _small([L, R], [(0, 1)], k=1)
    with pytest.raises(ConfigurationError):
        run(graph, StandardMatchingProgram(), EngineConfig(mode=EngineMode.HYBRID))


def test_matching_is_deterministic_for_a_seed():
    graph = _bipartite(7, k=4)
    first = run(graph, HandshakeMatchingProgram(), EngineConfig(mode=EngineMode.HYBRID, k=4, rng_seed=11))
    second = run(graph, HandshakeMatchingProgram(), EngineConfig(mode=EngineMode.HYBRID, k=4, rng_seed=11))
    assert first.values == second.values
    assert first.metrics.global_iterations == second.metrics.global_iterations


def test_graph_without_sides_is_rejected():
    raw = RawGraph.from_edges(2, [(0, 1, 1.0)])
    graph = classify_vertices(raw, partition_blocks(raw, 1))
    with pytest.raises(ConfigurationError):
        run(graph, StandardMatchingProgram(), EngineConfig())


def test_edge_inside_one_side_is_rejected():
    raw = RawGraph.from_edges(3, [(0, 1, 1.0), (0, 2, 1.0)], sides=[Side.LEFT, Side.LEFT, Side.RIGHT])
    graph = classify_vertices(raw, partition_blocks(raw, 1))
    with pytest.raises(ConfigurationError):
        run(graph, HandshakeMatchingProgram(), EngineConfig(mode=EngineMode.HYBRID))
