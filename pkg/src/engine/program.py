"""
Vertex program contract.
A program supplies one compute() step shared by local and boundary vertices;
the engine decides when and with which messages it runs.
"""

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, ClassVar, FrozenSet, Optional, Sequence, Tuple

from src.domain.graph import Edge, PartitionedGraph, Side
from src.domain.models import EngineMode
from src.engine.messages import AggregateOp, Combiner, Message, Payload, Phase

if TYPE_CHECKING:
    from src.engine.worker import PartitionWorker


@dataclass
class VertexState:
    """Mutable per-vertex record owned by exactly one worker."""
    value: Any = None
    active: bool = True
    algo_state: Any = None


class ComputeContext:
    """The view of the engine a vertex gets during one compute() call."""

    __slots__ = ("_worker", "_state", "vertex", "superstep", "phase", "pseudo_superstep", "halted")

    def __init__(self, worker: "PartitionWorker", vertex: int, state: VertexState,
                 superstep: int, phase: Phase, pseudo_superstep: int = 0):
        self._worker = worker
        self._state = state
        self.vertex = vertex
        self.superstep = superstep
        self.phase = phase
        self.pseudo_superstep = pseudo_superstep
        self.halted = False

    @property
    def value(self) -> Any:
        return self._state.value

    @value.setter
    def value(self, new_value: Any) -> None:
        self._state.value = new_value

    @property
    def algo_state(self) -> Any:
        return self._state.algo_state

    @algo_state.setter
    def algo_state(self, new_state: Any) -> None:
        self._state.algo_state = new_state

    @property
    def out_edges(self) -> Tuple[Edge, ...]:
        return self._worker.graph.out_edges[self.vertex]

    @property
    def out_degree(self) -> int:
        return len(self._worker.graph.out_edges[self.vertex])

    @property
    def num_vertices(self) -> int:
        return self._worker.graph.num_vertices

    @property
    def side(self) -> Optional[Side]:
        return self._worker.graph.side_of(self.vertex)

    @property
    def random(self) -> random.Random:
        """Deterministic generator private to this vertex."""
        return self._worker.vertex_rng(self.vertex)

    @property
    def aggregated_value(self) -> Optional[float]:
        """Aggregate reduced at the previous barrier (None before the first one)."""
        return self._worker.previous_aggregate

    def send_message(self, target: int, payload: Payload) -> None:
        self._worker.send(self.vertex, target, payload, self.phase)

    def send_to_neighbors(self, payload: Payload) -> None:
        for edge in self.out_edges:
            self._worker.send(self.vertex, edge.target, payload, self.phase)

    def vote_to_halt(self) -> None:
        # Applied by the worker once compute() returns
        self.halted = True

    def aggregate(self, value: float) -> None:
        self._worker.submit_aggregate(value)


class VertexProgram(ABC):
    """User-supplied vertex behaviour."""

    name: ClassVar[str] = "program"
    combiner: Optional[Combiner] = None
    source_combiner: Optional[Combiner] = None
    aggregate_op: Optional[AggregateOp] = None
    # None runs on every engine
    engine_modes: ClassVar[Optional[FrozenSet[EngineMode]]] = None

    def prepare(self, graph: PartitionedGraph) -> None:
        """Reject graphs the program cannot run on; the default accepts any graph."""

    def initial_value(self, vertex: int) -> Any:
        return None

    @abstractmethod
    def compute(self, ctx: ComputeContext, messages: Sequence[Message]) -> None:
        """One step of one vertex."""

    def output_value(self, state: VertexState) -> Any:
        return state.value
