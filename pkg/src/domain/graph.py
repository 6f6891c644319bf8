"""
Graph model.
Directed graphs with dense vertex ids, partition maps and the local/boundary
classification the hybrid engine schedules by.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from src.domain.errors import ConfigurationError, PartitionMapError

logger = logging.getLogger(__name__)


class VertexKind(str, Enum):
    """Placement of a vertex relative to its in-edges."""
    LOCAL = "local"
    BOUNDARY = "boundary"


class Side(str, Enum):
    """Bipartite side tag."""
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Edge:
    """Out-edge; `remote` is set once a partition map is known."""
    target: int
    weight: float = 1.0
    remote: bool = False


@dataclass
class RawGraph:
    """Directed multigraph over dense ids [0, num_vertices)."""
    num_vertices: int
    out_edges: List[List[Edge]]
    original_ids: List[int]
    sides: Optional[List[Side]] = None
    _dense: Dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edges(
        cls,
        num_vertices: int,
        edges: Iterable[Tuple[int, int, float]],
        original_ids: Optional[Sequence[int]] = None,
        sides: Optional[Sequence[Side]] = None,
    ) -> "RawGraph":
        """Build from (source, target, weight) triples over dense ids."""
        if num_vertices < 0:
            raise ConfigurationError(f"Vertex count must be non-negative, got {num_vertices}")
        out_edges: List[List[Edge]] = [[] for _ in range(num_vertices)]
        for source, target, weight in edges:
            if not (0 <= source < num_vertices and 0 <= target < num_vertices):
                raise ConfigurationError(f"Edge {source}->{target} outside [0, {num_vertices})")
            if weight < 0:
                raise ConfigurationError(f"Negative weight {weight} on edge {source}->{target}")
            out_edges[source].append(Edge(target=target, weight=float(weight)))
        ids = list(original_ids) if original_ids is not None else list(range(num_vertices))
        if len(ids) != num_vertices:
            raise ConfigurationError("original_ids must list one id per vertex")
        side_list = list(sides) if sides is not None else None
        if side_list is not None and len(side_list) != num_vertices:
            raise ConfigurationError("sides must tag every vertex")
        return cls(num_vertices=num_vertices, out_edges=out_edges, original_ids=ids, sides=side_list)

    @property
    def num_edges(self) -> int:
        return sum(len(edges) for edges in self.out_edges)

    def edges(self) -> Iterator[Tuple[int, Edge]]:
        for source, edges in enumerate(self.out_edges):
            for edge in edges:
                yield source, edge

    def in_degrees(self) -> List[int]:
        degrees = [0] * self.num_vertices
        for _, edge in self.edges():
            degrees[edge.target] += 1
        return degrees

    def dense_id(self, original_id: int) -> int:
        """Map an id from the input file back to its dense id."""
        if not self._dense:
            self._dense.update({orig: dense for dense, orig in enumerate(self.original_ids)})
        try:
            return self._dense[original_id]
        except KeyError:
            raise ConfigurationError(f"Unknown vertex id {original_id}") from None


@dataclass(frozen=True)
class PartitionMap:
    """Total assignment of vertices to partitions [0, k)."""
    assignment: Tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"Partition count must be >= 1, got {self.k}")
        for vertex, part in enumerate(self.assignment):
            if not 0 <= part < self.k:
                raise PartitionMapError(f"Vertex {vertex} assigned to partition {part}, outside [0, {self.k})")

    def partition_of(self, vertex: int) -> int:
        return self.assignment[vertex]

    def __len__(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class GraphStats:
    vertices: int
    edges: int
    boundary_vertices: int
    cut_edges: int
    partition_sizes: Tuple[int, ...]


@dataclass(frozen=True)
class PartitionedGraph:
    """Immutable topology shared read-only by every partition worker."""
    out_edges: Tuple[Tuple[Edge, ...], ...]
    in_degree: Tuple[int, ...]
    kinds: Tuple[VertexKind, ...]
    partition_map: PartitionMap
    partition_vertices: Tuple[Tuple[int, ...], ...]
    original_ids: Tuple[int, ...]
    sides: Optional[Tuple[Side, ...]] = None

    @property
    def num_vertices(self) -> int:
        return len(self.out_edges)

    @property
    def num_edges(self) -> int:
        return sum(len(edges) for edges in self.out_edges)

    @property
    def k(self) -> int:
        return self.partition_map.k

    def partition_of(self, vertex: int) -> int:
        return self.partition_map.assignment[vertex]

    def is_boundary(self, vertex: int) -> bool:
        return self.kinds[vertex] is VertexKind.BOUNDARY

    def out_degree(self, vertex: int) -> int:
        return len(self.out_edges[vertex])

    def boundary_vertices(self, partition: int) -> Tuple[int, ...]:
        return tuple(v for v in self.partition_vertices[partition] if self.is_boundary(v))

    def local_vertices(self, partition: int) -> Tuple[int, ...]:
        return tuple(v for v in self.partition_vertices[partition] if not self.is_boundary(v))

    def side_of(self, vertex: int) -> Optional[Side]:
        return self.sides[vertex] if self.sides is not None else None

    def stats(self) -> GraphStats:
        cut = sum(1 for edges in self.out_edges for edge in edges if edge.remote)
        return GraphStats(
            vertices=self.num_vertices,
            edges=self.num_edges,
            boundary_vertices=sum(1 for kind in self.kinds if kind is VertexKind.BOUNDARY),
            cut_edges=cut,
            partition_sizes=tuple(len(vs) for vs in self.partition_vertices),
        )


GraphLike = Union[RawGraph, PartitionedGraph]


def partition_hash(graph: GraphLike, k: int) -> PartitionMap:
    """partition(v) = id(v) mod k."""
    if k < 1:
        raise ConfigurationError(f"Partition count must be >= 1, got {k}")
    return PartitionMap(assignment=tuple(v % k for v in range(graph.num_vertices)), k=k)


def partition_blocks(graph: GraphLike, k: int) -> PartitionMap:
    """Contiguous id ranges of ceil(|V|/k) vertices each."""
    if k < 1:
        raise ConfigurationError(f"Partition count must be >= 1, got {k}")
    block = max(1, math.ceil(graph.num_vertices / k))
    return PartitionMap(assignment=tuple(min(v // block, k - 1) for v in range(graph.num_vertices)), k=k)


def classify_vertices(graph: RawGraph, partition_map: PartitionMap) -> PartitionedGraph:
    """Attach the partition map, flag remote edges and classify every vertex.

    A vertex is Local iff every in-edge source shares its partition; vertices
    without in-edges are Local.
    """
    if len(partition_map) != graph.num_vertices:
        raise PartitionMapError(
            f"Partition map covers {len(partition_map)} vertices, graph has {graph.num_vertices}"
        )
    assignment = partition_map.assignment
    boundary = [False] * graph.num_vertices
    in_degree = [0] * graph.num_vertices
    out_edges: List[Tuple[Edge, ...]] = []
    for source, edges in enumerate(graph.out_edges):
        flagged = []
        for edge in edges:
            remote = assignment[edge.target] != assignment[source]
            if remote:
                boundary[edge.target] = True
            in_degree[edge.target] += 1
            flagged.append(Edge(target=edge.target, weight=edge.weight, remote=remote))
        out_edges.append(tuple(flagged))

    members: List[List[int]] = [[] for _ in range(partition_map.k)]
    for vertex, part in enumerate(assignment):
        members[part].append(vertex)

    partitioned = PartitionedGraph(
        out_edges=tuple(out_edges),
        in_degree=tuple(in_degree),
        kinds=tuple(VertexKind.BOUNDARY if b else VertexKind.LOCAL for b in boundary),
        partition_map=partition_map,
        partition_vertices=tuple(tuple(vs) for vs in members),
        original_ids=tuple(graph.original_ids),
        sides=tuple(graph.sides) if graph.sides is not None else None,
    )
    stats = partitioned.stats()
    logger.info(
        f"Classified {stats.vertices} vertices into {partition_map.k} partitions: "
        f"{stats.boundary_vertices} boundary, {stats.cut_edges} cut edges"
    )
    return partitioned
