"""
Randomised bipartite maximal matching.

StandardMatchingProgram runs the request / grant / accept cycle on a fixed
three-superstep schedule (standard and AM engines). HandshakeMatchingProgram
runs the stateful request / grant / accept / deny handshake on any engine:
a right vertex holds at most one outstanding grant, and a left vertex that is
denied stays active and requests again.

In both programs a matched right vertex ignores requests, so a left vertex
whose neighbours are all matched hears nothing back and halts.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from src.domain.errors import ConfigurationError, ProtocolError
from src.domain.graph import PartitionedGraph, Side
from src.domain.models import EngineMode
from src.engine.messages import MatchToken, Message, Phase
from src.engine.program import ComputeContext, VertexProgram, VertexState


class MatchStatus(str, Enum):
    UNMATCHED = "unmatched"
    UNGRANTED = "ungranted"
    GRANTED = "granted"
    MATCHED = "matched"


@dataclass
class MatchState:
    side: Side
    status: MatchStatus
    partner: Optional[int] = None
    granted_to: Optional[int] = None
    # requesters a granted right vertex answers once its grant resolves
    held: List[int] = field(default_factory=list)
    # messages consumed before the stage that handles them
    stash: List[Message] = field(default_factory=list)

    @classmethod
    def for_side(cls, side: Side) -> "MatchState":
        return cls(side=side, status=MatchStatus.UNMATCHED if side is Side.LEFT else MatchStatus.UNGRANTED)

    def match(self, partner: int) -> None:
        self.status = MatchStatus.MATCHED
        self.partner = partner
        self.granted_to = None
        self.held = []


def _senders(messages: Sequence[Message], token: MatchToken) -> List[int]:
    """Distinct senders of `token`, in consumption order."""
    seen = []
    for msg in messages:
        if msg.payload is token and msg.source not in seen:
            seen.append(msg.source)
    return seen


class _MatchingProgram(VertexProgram):

    def prepare(self, graph: PartitionedGraph) -> None:
        if graph.sides is None:
            raise ConfigurationError("Bipartite matching needs left/right side tags")
        for source, edges in enumerate(graph.out_edges):
            for edge in edges:
                if graph.sides[source] is graph.sides[edge.target]:
                    raise ConfigurationError(
                        f"Edge {graph.original_ids[source]}->{graph.original_ids[edge.target]} "
                        f"joins two {graph.sides[source].value} vertices; graph is not bipartite"
                    )

    def _state(self, ctx: ComputeContext) -> MatchState:
        if ctx.algo_state is None:
            ctx.algo_state = MatchState.for_side(ctx.side)
        return ctx.algo_state

    @staticmethod
    def _grant(ctx: ComputeContext, state: MatchState, left: int) -> None:
        if state.status is not MatchStatus.UNGRANTED:
            raise ProtocolError(f"Right vertex {ctx.vertex} granted {left} while {state.status.value}")
        state.status = MatchStatus.GRANTED
        state.granted_to = left
        ctx.send_message(left, MatchToken.GRANT)

    @staticmethod
    def _accept(ctx: ComputeContext, state: MatchState, right: int) -> None:
        state.match(right)
        ctx.value = right
        ctx.send_message(right, MatchToken.ACCEPT)

    def output_value(self, state: VertexState) -> Optional[int]:
        match = state.algo_state
        return match.partner if match is not None else None


class StandardMatchingProgram(_MatchingProgram):
    """Stage = superstep mod 3: 0 requests (and accept bookkeeping), 1 grants, 2 accepts.

    Under AM a same-partition message can reach its receiver one stage early;
    it is stashed and the receiver stays active until the stage that handles it.
    """

    name = "bm-standard"
    engine_modes = frozenset({EngineMode.STANDARD, EngineMode.AM})

    STAGES: Dict[Tuple[Side, MatchToken], int] = {
        (Side.RIGHT, MatchToken.ACCEPT): 0,
        (Side.RIGHT, MatchToken.DENY): 0,
        (Side.RIGHT, MatchToken.REQUEST): 1,
        (Side.LEFT, MatchToken.GRANT): 2,
        (Side.LEFT, MatchToken.DENY): 2,
    }

    def compute(self, ctx: ComputeContext, messages: Sequence[Message]) -> None:
        state = self._state(ctx)
        stage = ctx.superstep % 3
        due = self._due(state, messages, stage)
        if state.side is Side.LEFT:
            halt = self._left(ctx, state, due, stage)
        else:
            halt = self._right(ctx, state, due, stage)
        if halt and not state.stash:
            ctx.vote_to_halt()

    def _due(self, state: MatchState, messages: Sequence[Message], stage: int) -> List[Message]:
        due, early = [], []
        for msg in [*state.stash, *messages]:
            (due if self.STAGES[(state.side, msg.payload)] == stage else early).append(msg)
        state.stash = early
        return due

    def _left(self, ctx: ComputeContext, state: MatchState, messages: Sequence[Message], stage: int) -> bool:
        if state.status is MatchStatus.MATCHED:
            return True
        if stage == 0:
            ctx.send_to_neighbors(MatchToken.REQUEST)
        elif stage == 2:
            grants = _senders(messages, MatchToken.GRANT)
            if grants:
                chosen = grants[ctx.random.randrange(len(grants))]
                self._accept(ctx, state, chosen)
                for other in grants:
                    if other != chosen:
                        ctx.send_message(other, MatchToken.DENY)
            elif _senders(messages, MatchToken.DENY):
                # Only denials: stay active and request again next cycle
                return False
        return True

    def _right(self, ctx: ComputeContext, state: MatchState, messages: Sequence[Message], stage: int) -> bool:
        if stage == 0:
            accepted = _senders(messages, MatchToken.ACCEPT)
            if len(accepted) > 1 or (accepted and accepted[0] != state.granted_to):
                raise ProtocolError(f"Right vertex {ctx.vertex} got unexpected acceptances {accepted}")
            if accepted:
                state.match(accepted[0])
                ctx.value = accepted[0]
            elif state.status is MatchStatus.GRANTED:
                state.status = MatchStatus.UNGRANTED
                state.granted_to = None
        elif stage == 1 and state.status is not MatchStatus.MATCHED:
            requests = _senders(messages, MatchToken.REQUEST)
            if requests:
                chosen = requests[ctx.random.randrange(len(requests))]
                self._grant(ctx, state, chosen)
                for other in requests:
                    if other != chosen:
                        ctx.send_message(other, MatchToken.DENY)
        return True


class HandshakeMatchingProgram(_MatchingProgram):
    """Stateful handshake that tolerates any delivery timing.

    A right vertex handles replies (accept, deny) before requests of the same
    batch. While granted it denies new requests, except inside a local phase,
    where it holds them until the grant resolves.
    """

    name = "bm-handshake"

    def compute(self, ctx: ComputeContext, messages: Sequence[Message]) -> None:
        state = self._state(ctx)
        if state.side is Side.LEFT:
            halt = self._left(ctx, state, messages)
        else:
            self._right(ctx, state, messages)
            halt = True
        if halt:
            ctx.vote_to_halt()

    def _holds_requests(self, ctx: ComputeContext) -> bool:
        # A local phase cannot see the remote reply that resolves the grant
        return ctx.phase is Phase.LOCAL

    def _left(self, ctx: ComputeContext, state: MatchState, messages: Sequence[Message]) -> bool:
        if not messages:
            if state.status is MatchStatus.UNMATCHED:
                ctx.send_to_neighbors(MatchToken.REQUEST)
            return True
        denied = False
        for msg in messages:
            if msg.payload is MatchToken.GRANT:
                if state.status is MatchStatus.UNMATCHED:
                    self._accept(ctx, state, msg.source)
                else:
                    ctx.send_message(msg.source, MatchToken.DENY)
            elif msg.payload is MatchToken.DENY:
                denied = True
        return state.status is MatchStatus.MATCHED or not denied

    def _right(self, ctx: ComputeContext, state: MatchState, messages: Sequence[Message]) -> None:
        for msg in messages:
            if msg.payload is not MatchToken.ACCEPT and msg.payload is not MatchToken.DENY:
                continue
            if state.status is not MatchStatus.GRANTED or msg.source != state.granted_to:
                raise ProtocolError(
                    f"Right vertex {ctx.vertex} got {msg.payload.value} from {msg.source} "
                    f"while {state.status.value}"
                )
            if msg.payload is MatchToken.ACCEPT:
                state.match(msg.source)
                ctx.value = msg.source
            else:
                state.status = MatchStatus.UNGRANTED
                state.granted_to = None

        requests = _senders(messages, MatchToken.REQUEST)
        if state.status is MatchStatus.MATCHED:
            return
        if state.status is MatchStatus.GRANTED:
            if self._holds_requests(ctx):
                state.held.extend(r for r in requests if r not in state.held)
            else:
                for requester in requests:
                    ctx.send_message(requester, MatchToken.DENY)
            return
        candidates = state.held + [r for r in requests if r not in state.held]
        state.held = []
        if not candidates:
            return
        chosen = candidates[ctx.random.randrange(len(candidates))]
        self._grant(ctx, state, chosen)
        for other in candidates:
            if other != chosen:
                ctx.send_message(other, MatchToken.DENY)
