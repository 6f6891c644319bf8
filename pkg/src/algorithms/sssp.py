"""
Single-source shortest paths.
"""

import math
from typing import Sequence

from src.domain.errors import ConfigurationError
from src.domain.graph import PartitionedGraph
from src.engine.messages import MIN_COMBINER, Message
from src.engine.program import ComputeContext, VertexProgram

INF = math.inf


class SsspProgram(VertexProgram):
    """Wavefront relaxation: a vertex forwards its distance only when it shrinks."""

    name = "sssp"
    combiner = MIN_COMBINER
    # Parallel edges carry different offers from one source, so keep the smallest
    source_combiner = MIN_COMBINER

    def __init__(self, source: int):
        self.source = source

    def prepare(self, graph: PartitionedGraph) -> None:
        if not 0 <= self.source < graph.num_vertices:
            raise ConfigurationError(f"Source vertex {self.source} outside [0, {graph.num_vertices})")
        for edges in graph.out_edges:
            for edge in edges:
                if edge.weight < 0:
                    raise ConfigurationError(f"Negative edge weight {edge.weight}")

    def initial_value(self, vertex: int) -> float:
        return INF

    def compute(self, ctx: ComputeContext, messages: Sequence[Message]) -> None:
        if ctx.superstep == 0:
            if ctx.vertex == self.source:
                ctx.value = 0.0
                for edge in ctx.out_edges:
                    ctx.send_message(edge.target, ctx.value + edge.weight)
            else:
                ctx.value = INF
        else:
            new_value = min((m.payload for m in messages), default=INF)
            if new_value < ctx.value:
                ctx.value = new_value
                for edge in ctx.out_edges:
                    ctx.send_message(edge.target, new_value + edge.weight)
        ctx.vote_to_halt()
