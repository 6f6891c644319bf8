"""
PageRank vertex programs.

IncrementalPageRankProgram accumulates rank changes and only forwards changes
of at least the tolerance. PlainPageRankProgram recomputes every value from
the previous step for a fixed number of updates.
"""

from typing import Sequence

from src.config.settings import DAMPING, RESET_PROBABILITY
from src.domain.errors import ConfigurationError
from src.engine.messages import SUM_COMBINER, AggregateOp, Message
from src.engine.program import ComputeContext, VertexProgram


class IncrementalPageRankProgram(VertexProgram):
    """Unnormalised fixed point v = 0.15 + 0.85 * sum(v_u / outdeg_u)."""

    name = "pagerank-inc"
    combiner = SUM_COMBINER
    source_combiner = SUM_COMBINER
    aggregate_op = AggregateOp.SUM

    def __init__(self, tolerance: float):
        if tolerance <= 0:
            raise ConfigurationError(f"Tolerance must be positive, got {tolerance}")
        self.tolerance = tolerance

    def initial_value(self, vertex: int) -> float:
        return 0.0

    def compute(self, ctx: ComputeContext, messages: Sequence[Message]) -> None:
        if ctx.superstep == 0:
            ctx.value = 0.0
            delta = RESET_PROBABILITY
            propagate = True
        else:
            delta = sum(m.payload for m in messages)
            propagate = delta >= self.tolerance
        ctx.value += delta
        ctx.aggregate(delta)
        # Dangling vertices keep what they receive
        if propagate and ctx.out_degree > 0:
            share = DAMPING * delta / ctx.out_degree
            for edge in ctx.out_edges:
                ctx.send_message(edge.target, share)
        ctx.vote_to_halt()


class PlainPageRankProgram(VertexProgram):
    """Normalised v = 0.15/N + 0.85 * sum(v_u / outdeg_u), `budget` updates per vertex.

    algo_state counts the updates a vertex has applied, so the program halts
    on every engine, including local phases that do not advance the superstep.
    """

    name = "pagerank-plain"
    combiner = SUM_COMBINER
    source_combiner = SUM_COMBINER
    aggregate_op = AggregateOp.SUM

    def __init__(self, budget: int):
        if budget < 1:
            raise ConfigurationError(f"Plain PageRank budget must be >= 1, got {budget}")
        self.budget = budget

    def initial_value(self, vertex: int) -> float:
        return 0.0

    def compute(self, ctx: ComputeContext, messages: Sequence[Message]) -> None:
        n = ctx.num_vertices
        if ctx.algo_state is None:
            ctx.value = 1.0 / n
            ctx.algo_state = 0
        else:
            previous = ctx.value
            ctx.value = RESET_PROBABILITY / n + DAMPING * sum(m.payload for m in messages)
            ctx.algo_state += 1
            ctx.aggregate(abs(ctx.value - previous))
        if ctx.algo_state >= self.budget:
            ctx.vote_to_halt()
        elif ctx.out_degree > 0:
            share = ctx.value / ctx.out_degree
            for edge in ctx.out_edges:
                ctx.send_message(edge.target, share)
