"""
Partition worker.
Executes the vertices of exactly one partition: standard/AM supersteps, the
hybrid global phase and the hybrid local phase of pseudo-supersteps.
"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from src.config.settings import MIN_PSEUDO_SUPERSTEP_CAP, PSEUDO_SUPERSTEP_FACTOR
from src.domain.errors import ConfigurationError
from src.domain.graph import PartitionedGraph
from src.domain.models import EngineConfig
from src.engine.messages import (
    Message, MessageQueues, Payload, Phase, QueueKind, combine_messages, reduce_aggregates, route_message
)
from src.engine.program import ComputeContext, VertexProgram, VertexState

logger = logging.getLogger(__name__)


@dataclass
class WorkerCounters:
    vertex_executions: int = 0
    pseudo_supersteps: int = 0
    local_phases: int = 0
    local_phase_deliveries: int = 0


class PartitionWorker:
    """Owns the vertex states and queues of one partition."""

    def __init__(self, index: int, graph: PartitionedGraph, program: VertexProgram, config: EngineConfig):
        self.index = index
        self.graph = graph
        self.program = program
        self.config = config
        self.vertices = graph.partition_vertices[index]
        self.boundary = graph.boundary_vertices(index)
        self.local = graph.local_vertices(index)
        self.participants = self.vertices if config.boundary_participation else self.local
        self.states: Dict[int, VertexState] = {
            v: VertexState(value=program.initial_value(v)) for v in self.vertices
        }
        self.queues = MessageQueues()
        self.counters = WorkerCounters()
        self.previous_aggregate: Optional[float] = None
        self.in_local_phase = False
        self.pseudo_superstep_cap = config.pseudo_superstep_cap or max(
            PSEUDO_SUPERSTEP_FACTOR * len(self.vertices), MIN_PSEUDO_SUPERSTEP_CAP
        )
        self._vertex_rngs: Dict[int, random.Random] = {}
        self._aggregates: List[float] = []
        self._seq = 0

    # -- vertex-facing services -------------------------------------------------

    def vertex_rng(self, vertex: int) -> random.Random:
        rng = self._vertex_rngs.get(vertex)
        if rng is None:
            rng = random.Random(f"{self.config.rng_seed}:{vertex}")
            self._vertex_rngs[vertex] = rng
        return rng

    def send(self, source: int, target: int, payload: Payload, phase: Phase) -> QueueKind:
        msg = Message(source=source, target=target, payload=payload, seq=self._seq)
        self._seq += 1
        kind = route_message(msg, self.graph, self.index, phase, self.config.boundary_participation)
        self.queues.place(msg, kind)
        return kind

    def submit_aggregate(self, value: float) -> None:
        if self.program.aggregate_op is None:
            raise ConfigurationError(f"{self.program.name} submitted an aggregate without an aggregator")
        self._aggregates.append(value)

    # -- execution ----------------------------------------------------------------

    def _execute(self, vertex: int, messages: Sequence[Message], superstep: int,
                 phase: Phase, pseudo_superstep: int = 0) -> None:
        batch = combine_messages(
            messages, self.program.combiner, self.program.source_combiner, self.config.combiner_enabled
        )
        state = self.states[vertex]
        state.active = True
        ctx = ComputeContext(self, vertex, state, superstep, phase, pseudo_superstep)
        self.program.compute(ctx, batch)
        if ctx.halted:
            state.active = False
        self.counters.vertex_executions += 1

    def _take(self, vertex: int) -> List[Message]:
        return self.queues.take(self.queues.lmsgs, vertex) + self.queues.take(self.queues.bmsgs, vertex)

    def run_superstep(self, superstep: int, live: bool = False) -> None:
        """One standard superstep over every vertex in ascending id order.

        With `live` set, a same-partition message is consumed by its receiver in
        this superstep if the receiver has not been visited yet.
        """
        inbox: Dict[int, List[Message]] = {}
        if not live:
            inbox = self.queues.take_all(self.queues.lmsgs)
            for vertex, msgs in self.queues.take_all(self.queues.bmsgs).items():
                inbox.setdefault(vertex, []).extend(msgs)
        for vertex in self.vertices:
            msgs = self._take(vertex) if live else inbox.pop(vertex, [])
            if not msgs and not self.states[vertex].active:
                continue
            self._execute(vertex, msgs, superstep, Phase.STANDARD)

    def global_phase(self, iteration: int) -> None:
        """Run each active boundary vertex once on the messages of the previous iteration."""
        batch = self.queues.take_all(self.queues.bmsgs)
        for vertex in self.boundary:
            msgs = batch.pop(vertex, [])
            if not msgs and not self.states[vertex].active:
                continue
            self._execute(vertex, msgs, iteration, Phase.GLOBAL)

    def _participants_active(self) -> bool:
        return any(self.states[v].active for v in self.participants)

    def local_phase(self, iteration: int) -> bool:
        """Pseudo-supersteps until participants are inactive and lMsgs is empty.

        Returns False when the pseudo-superstep cap stopped the phase.
        """
        self.in_local_phase = True
        pseudo = 0
        try:
            while self._participants_active() or self.queues.has_local():
                if pseudo >= self.pseudo_superstep_cap:
                    logger.warning(
                        f"Partition {self.index}: local phase of iteration {iteration} "
                        f"hit the cap of {self.pseudo_superstep_cap} pseudo-supersteps"
                    )
                    return False
                self._pseudo_superstep(iteration, pseudo)
                pseudo += 1
        finally:
            self.in_local_phase = False
            self.counters.pseudo_supersteps += pseudo
            self.counters.local_phases += 1
        logger.debug(f"Partition {self.index}: iteration {iteration} local phase ran {pseudo} pseudo-supersteps")
        return True

    def _pseudo_superstep(self, iteration: int, pseudo: int) -> None:
        live = self.config.async_local_messaging
        inbox = {} if live else self.queues.take_all(self.queues.lmsgs)
        for vertex in self.participants:
            msgs = self.queues.take(self.queues.lmsgs, vertex) if live else inbox.pop(vertex, [])
            if not msgs and not self.states[vertex].active:
                continue
            self._execute(vertex, msgs, iteration, Phase.LOCAL, pseudo)

    def run_global_iteration(self, iteration: int) -> bool:
        self.global_phase(iteration)
        return self.local_phase(iteration)

    # -- barrier-facing services ----------------------------------------------------

    def flush_remote(self) -> List[Message]:
        """Combined contents of rMsgs, ready for delivery."""
        return combine_messages(
            self.queues.drain_remote(),
            self.program.combiner,
            self.program.source_combiner,
            self.config.combiner_enabled,
        )

    def deliver(self, msg: Message) -> None:
        """Accept a message from another partition and reactivate its receiver."""
        if self.in_local_phase:
            # Cross-partition traffic is only legal at the barrier
            self.counters.local_phase_deliveries += 1
            logger.error(f"Partition {self.index}: message for {msg.target} delivered inside a local phase")
        queue = self.queues.bmsgs if self.graph.is_boundary(msg.target) else self.queues.lmsgs
        queue[msg.target].append(msg)
        self.states[msg.target].active = True

    def partition_aggregate(self) -> Optional[float]:
        if self.program.aggregate_op is None:
            return None
        value = reduce_aggregates(self._aggregates, self.program.aggregate_op)
        self._aggregates = []
        return value

    def active_count(self) -> int:
        return sum(1 for state in self.states.values() if state.active)
