"""
Messages, per-partition queues and the reductions applied to them.

Routing follows the three-way split of the hybrid worker: messages for other
partitions go to rMsgs, messages for this partition go to lMsgs or bMsgs
depending on the receiver's classification and on boundary participation.
"""

import math
import operator
from collections import defaultdict
from dataclasses import dataclass, replace
from enum import Enum
from functools import reduce
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from src.domain.errors import ConfigurationError
from src.domain.graph import PartitionedGraph


class MatchToken(str, Enum):
    REQUEST = "request"
    GRANT = "grant"
    DENY = "deny"
    ACCEPT = "accept"


Payload = Union[float, MatchToken]


@dataclass(frozen=True)
class Message:
    source: int
    target: int
    payload: Payload
    seq: int = 0

    def sort_key(self) -> Tuple[int, int]:
        return (self.source, self.seq)


class Phase(str, Enum):
    STANDARD = "standard-superstep"
    GLOBAL = "global"
    LOCAL = "local"


class QueueKind(str, Enum):
    LOCAL = "lMsgs"
    BOUNDARY = "bMsgs"
    REMOTE = "rMsgs"


@dataclass(frozen=True)
class Combiner:
    """Associative, commutative fold over message payloads."""
    name: str
    fold: Callable[[Any, Any], Any]

    def reduce(self, payloads: Iterable[Any]) -> Any:
        return reduce(self.fold, payloads)


MIN_COMBINER = Combiner("min", min)
SUM_COMBINER = Combiner("sum", operator.add)
# Source-combine default: only the latest message from a source survives
KEEP_LATEST = Combiner("latest", lambda earlier, later: later)


class AggregateOp(str, Enum):
    MIN = "min"
    MAX = "max"
    SUM = "sum"


AGGREGATE_IDENTITY = {AggregateOp.MIN: math.inf, AggregateOp.MAX: -math.inf, AggregateOp.SUM: 0.0}
AGGREGATE_FOLD = {AggregateOp.MIN: min, AggregateOp.MAX: max, AggregateOp.SUM: operator.add}


class MessageQueues:
    """lMsgs / bMsgs keyed by receiving vertex, plus the outgoing rMsgs buffer."""

    def __init__(self):
        self.lmsgs: Dict[int, List[Message]] = defaultdict(list)
        self.bmsgs: Dict[int, List[Message]] = defaultdict(list)
        self.rmsgs: List[Message] = []
        self.placed = {kind: 0 for kind in QueueKind}

    def place(self, msg: Message, kind: QueueKind) -> None:
        if kind is QueueKind.REMOTE:
            self.rmsgs.append(msg)
        elif kind is QueueKind.BOUNDARY:
            self.bmsgs[msg.target].append(msg)
        else:
            self.lmsgs[msg.target].append(msg)
        self.placed[kind] += 1

    @staticmethod
    def take(queue: Dict[int, List[Message]], vertex: int) -> List[Message]:
        return queue.pop(vertex, [])

    @staticmethod
    def take_all(queue: Dict[int, List[Message]]) -> Dict[int, List[Message]]:
        batch = dict(queue)
        queue.clear()
        return batch

    def drain_remote(self) -> List[Message]:
        outgoing, self.rmsgs = self.rmsgs, []
        return outgoing

    def has_local(self) -> bool:
        return any(self.lmsgs.values())

    def pending(self) -> int:
        return (
            sum(len(q) for q in self.lmsgs.values())
            + sum(len(q) for q in self.bmsgs.values())
            + len(self.rmsgs)
        )

    @property
    def routed(self) -> int:
        return sum(self.placed.values())


def route_message(
    msg: Message,
    graph: PartitionedGraph,
    partition: int,
    phase: Phase,
    boundary_participation: bool = False,
) -> QueueKind:
    """Decide which queue of `partition` receives `msg`."""
    if not 0 <= msg.target < graph.num_vertices:
        raise ConfigurationError(f"Vertex {msg.source} sent a message to unknown vertex {msg.target}")
    if graph.partition_of(msg.target) != partition:
        return QueueKind.REMOTE
    if not graph.is_boundary(msg.target):
        return QueueKind.LOCAL
    if phase is Phase.STANDARD or not boundary_participation:
        return QueueKind.BOUNDARY
    return QueueKind.LOCAL


def apply_combiner(messages: Sequence[Message], combiner: Combiner) -> List[Message]:
    """One message per target; the fold runs in (source, seq) order."""
    groups: Dict[int, List[Message]] = defaultdict(list)
    for msg in sorted(messages, key=Message.sort_key):
        groups[msg.target].append(msg)
    combined = []
    for target in sorted(groups):
        group = groups[target]
        if len(group) == 1:
            combined.append(group[0])
        else:
            combined.append(replace(group[0], payload=combiner.reduce(m.payload for m in group)))
    return combined


def apply_source_combiner(messages: Sequence[Message], rule: Combiner = KEEP_LATEST) -> List[Message]:
    """One message per (source, target); the default rule keeps the last one sent."""
    groups: Dict[Tuple[int, int], List[Message]] = defaultdict(list)
    for msg in sorted(messages, key=Message.sort_key):
        groups[(msg.source, msg.target)].append(msg)
    combined = []
    for key in sorted(groups):
        group = groups[key]
        if len(group) == 1:
            combined.append(group[0])
        else:
            combined.append(replace(group[-1], payload=rule.reduce(m.payload for m in group)))
    return combined


def combine_messages(
    messages: Sequence[Message],
    combiner: Optional[Combiner],
    source_combiner: Optional[Combiner],
    enabled: bool,
) -> List[Message]:
    """Source-combine, then combine; the result is in consumption order."""
    if enabled and source_combiner is not None:
        messages = apply_source_combiner(messages, source_combiner)
    if enabled and combiner is not None:
        messages = apply_combiner(messages, combiner)
    return sorted(messages, key=lambda m: (m.target, m.source, m.seq))


def reduce_aggregates(values: Iterable[float], op: AggregateOp) -> float:
    """Fold per-partition submissions; an empty fold yields the identity."""
    return reduce(AGGREGATE_FOLD[op], values, AGGREGATE_IDENTITY[op])
