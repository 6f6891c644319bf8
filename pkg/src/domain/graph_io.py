"""
Graph input/output.
Parses edge-list, DIMACS .gr and SNAP files, writes edge lists, builds the
synthetic desk-scale graphs and reads external partition maps.
"""

import logging
import random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Type, Union

import networkx as nx

from src.domain.errors import ConfigurationError, GraphFormatError, PartitionMapError
from src.domain.graph import PartitionMap, RawGraph, Side
from src.domain.models import GeneratorSpec, GraphFormat

logger = logging.getLogger(__name__)

SIDE_HEADERS = {"left": Side.LEFT, "right": Side.RIGHT}


def _resolve_format(fmt: Union[str, GraphFormat]) -> GraphFormat:
    try:
        return GraphFormat(fmt)
    except ValueError:
        raise ConfigurationError(
            f"Unknown graph format '{fmt}'; expected one of {[f.value for f in GraphFormat]}"
        ) from None


def _parse_int(token: str, path: str, line_number: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(f"Expected an integer vertex id, got '{token}'", path, line_number) from None
    if value < 0:
        raise GraphFormatError(f"Negative vertex id {value}", path, line_number)
    return value


def _parse_weight(token: str, path: str, line_number: int) -> float:
    try:
        weight = float(token)
    except ValueError:
        raise GraphFormatError(f"Expected a numeric weight, got '{token}'", path, line_number) from None
    if weight < 0:
        raise GraphFormatError(f"Negative edge weight {weight}", path, line_number)
    return weight


def _read_lines(path: str, error: Type[GraphFormatError]) -> Iterator[Tuple[int, str]]:
    """Numbered lines of a UTF-8 text file; undecodable bytes raise `error`."""
    line_number = 0
    with open(path, "r", encoding="utf-8") as f:
        try:
            for line_number, raw in enumerate(f, start=1):
                yield line_number, raw
        except UnicodeDecodeError as e:
            raise error(f"Not valid UTF-8 text: {e.reason}", path, line_number + 1) from None


def _compact(
    edges: List[Tuple[int, int, float]],
    side_ids: Dict[int, Side],
    path: str,
) -> RawGraph:
    """Map sparse input ids onto [0, |V|) in ascending input-id order."""
    ids = set(side_ids)
    for source, target, _ in edges:
        ids.add(source)
        ids.add(target)
    original_ids = sorted(ids)
    dense = {orig: i for i, orig in enumerate(original_ids)}
    sides: Optional[List[Side]] = None
    if side_ids:
        missing = [orig for orig in original_ids if orig not in side_ids]
        if missing:
            raise GraphFormatError(f"Vertex {missing[0]} has no left/right side tag", path)
        sides = [side_ids[orig] for orig in original_ids]
    return RawGraph.from_edges(
        len(original_ids),
        ((dense[s], dense[t], w) for s, t, w in edges),
        original_ids=original_ids,
        sides=sides,
    )


def _read_edgelist(path: str, undirected: bool, allow_weights: bool, allow_sides: bool) -> RawGraph:
    edges: List[Tuple[int, int, float]] = []
    side_ids: Dict[int, Side] = {}
    for line_number, raw in _read_lines(path, GraphFormatError):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if allow_sides and head in SIDE_HEADERS:
            if edges:
                raise GraphFormatError("Side headers must precede the edges", path, line_number)
            for token in tokens[1:]:
                side_ids[_parse_int(token, path, line_number)] = SIDE_HEADERS[head]
            continue
        max_tokens = 3 if allow_weights else 2
        if not 2 <= len(tokens) <= max_tokens:
            raise GraphFormatError(
                f"Expected 'src dst{' [weight]' if allow_weights else ''}', got '{line}'", path, line_number
            )
        source = _parse_int(tokens[0], path, line_number)
        target = _parse_int(tokens[1], path, line_number)
        weight = _parse_weight(tokens[2], path, line_number) if len(tokens) == 3 else 1.0
        edges.append((source, target, weight))
        if undirected:
            edges.append((target, source, weight))
    return _compact(edges, side_ids, path)


def _read_dimacs(path: str) -> RawGraph:
    num_vertices: Optional[int] = None
    declared_arcs = 0
    edges: List[Tuple[int, int, float]] = []
    for line_number, raw in _read_lines(path, GraphFormatError):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if len(tokens) != 4 or tokens[1] != "sp":
                raise GraphFormatError(f"Expected 'p sp n m', got '{line}'", path, line_number)
            num_vertices = _parse_int(tokens[2], path, line_number)
            declared_arcs = _parse_int(tokens[3], path, line_number)
        elif tokens[0] == "a":
            if num_vertices is None:
                raise GraphFormatError("Arc before 'p sp n m' header", path, line_number)
            if len(tokens) != 4:
                raise GraphFormatError(f"Expected 'a u v w', got '{line}'", path, line_number)
            u = _parse_int(tokens[1], path, line_number)
            v = _parse_int(tokens[2], path, line_number)
            if not (1 <= u <= num_vertices and 1 <= v <= num_vertices):
                raise GraphFormatError(f"Arc {u}->{v} outside [1, {num_vertices}]", path, line_number)
            edges.append((u - 1, v - 1, _parse_weight(tokens[3], path, line_number)))
        else:
            raise GraphFormatError(f"Unknown DIMACS line '{line}'", path, line_number)
    if num_vertices is None:
        raise GraphFormatError("Missing 'p sp n m' header", path)
    if declared_arcs != len(edges):
        logger.warning(f"{path}: header declares {declared_arcs} arcs, file lists {len(edges)}")
    return RawGraph.from_edges(num_vertices, edges, original_ids=range(1, num_vertices + 1))


def load_graph(path: str, fmt: Union[str, GraphFormat] = GraphFormat.EDGELIST, undirected: bool = False) -> RawGraph:
    """Load a directed graph and compact its ids to [0, |V|).

    Duplicate edges and self-loops are kept.
    """
    graph_format = _resolve_format(fmt)
    if graph_format is GraphFormat.DIMACS_GR:
        graph = _read_dimacs(path)
    elif graph_format is GraphFormat.SNAP:
        graph = _read_edgelist(path, undirected, allow_weights=False, allow_sides=False)
    else:
        graph = _read_edgelist(path, undirected, allow_weights=True, allow_sides=True)
    logger.info(f"Loaded {graph_format.value} graph {path}: |V|={graph.num_vertices}, |E|={graph.num_edges}")
    return graph


def _format_weight(weight: float) -> str:
    return str(int(weight)) if weight.is_integer() else repr(weight)


def save_graph(graph: RawGraph, path: str) -> None:
    """Write the edge-list format using the original vertex ids."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        if graph.sides is not None:
            for side in (Side.LEFT, Side.RIGHT):
                members = [str(graph.original_ids[v]) for v in range(graph.num_vertices) if graph.sides[v] is side]
                f.write(f"{side.value} {' '.join(members)}\n")
        for source, edge in graph.edges():
            f.write(f"{graph.original_ids[source]} {graph.original_ids[edge.target]} {_format_weight(edge.weight)}\n")
    logger.info(f"Wrote {graph.num_edges} edges to {path}")


def _from_undirected(nx_graph: nx.Graph, num_vertices: int, sides: Optional[List[Side]] = None) -> RawGraph:
    edges = []
    for u, v in sorted(tuple(sorted(e)) for e in nx_graph.edges()):
        edges.append((u, v, 1.0))
        edges.append((v, u, 1.0))
    return RawGraph.from_edges(num_vertices, edges, sides=sides)


def _alternate(first: Sequence[int], second: Sequence[int]) -> List[int]:
    """first[0], second[0], first[1], second[1], ... then the longer tail."""
    merged: List[int] = []
    for i in range(max(len(first), len(second))):
        merged.extend(seq[i] for seq in (first, second) if i < len(seq))
    return merged


def generate_graph(spec: GeneratorSpec) -> RawGraph:
    """Build a deterministic synthetic graph."""
    if spec.kind == "grid":
        if spec.width < 1 or spec.height < 1:
            raise ConfigurationError(f"Grid dimensions must be positive, got {spec.width}x{spec.height}")
        grid = nx.grid_2d_graph(spec.height, spec.width)
        # (row, col) -> row-major id so contiguous id blocks are row blocks
        grid = nx.relabel_nodes(grid, {(r, c): r * spec.width + c for r, c in grid.nodes()})
        graph = _from_undirected(grid, spec.width * spec.height)
    elif spec.kind == "bipartite":
        if spec.left < 1 or spec.right < 1:
            raise ConfigurationError(f"Bipartite sides must be non-empty, got {spec.left}x{spec.right}")
        bipartite = nx.bipartite.random_graph(spec.left, spec.right, spec.p, seed=spec.seed)
        # networkx numbers the left side first; alternate the sides so contiguous id blocks hold both
        order = _alternate(range(spec.left), range(spec.left, spec.left + spec.right))
        bipartite = nx.relabel_nodes(bipartite, {node: i for i, node in enumerate(order)})
        sides = [Side.LEFT if node < spec.left else Side.RIGHT for node in order]
        graph = _from_undirected(bipartite, spec.left + spec.right, sides)
    elif spec.kind == "powerlaw":
        if spec.n < 2 or not 1 <= spec.m < spec.n:
            raise ConfigurationError(f"powerlaw needs n >= 2 and 1 <= m < n, got n={spec.n}, m={spec.m}")
        graph = _from_undirected(nx.barabasi_albert_graph(spec.n, spec.m, seed=spec.seed), spec.n)
    else:
        if spec.n < 1:
            raise ConfigurationError(f"random graph needs n >= 1, got {spec.n}")
        digraph = nx.gnp_random_graph(spec.n, spec.p, seed=spec.seed, directed=True)
        rng = random.Random(spec.seed)
        edges = [(u, v, float(rng.randint(1, spec.max_weight))) for u, v in sorted(digraph.edges())]
        graph = RawGraph.from_edges(spec.n, edges)
    logger.info(f"Generated {spec.label()} (seed {spec.seed}): |V|={graph.num_vertices}, |E|={graph.num_edges}")
    return graph


def load_partition_map(path: str, graph: RawGraph, k: int) -> PartitionMap:
    """Read 'vertexId partitionId' lines (input ids); every vertex must be listed once."""
    if k < 1:
        raise ConfigurationError(f"Partition count must be >= 1, got {k}")
    assignment: List[Optional[int]] = [None] * graph.num_vertices
    for line_number, raw in _read_lines(path, PartitionMapError):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise PartitionMapError(f"Expected 'vertex partition', got '{line}'", path, line_number)
        original = _parse_int(tokens[0], path, line_number)
        part = _parse_int(tokens[1], path, line_number)
        try:
            vertex = graph.dense_id(original)
        except ConfigurationError:
            raise PartitionMapError(f"Unknown vertex {original}", path, line_number) from None
        if part >= k:
            raise PartitionMapError(f"Partition {part} outside [0, {k})", path, line_number)
        if assignment[vertex] is not None:
            raise PartitionMapError(f"Vertex {original} listed twice", path, line_number)
        assignment[vertex] = part
    missing = [graph.original_ids[v] for v, part in enumerate(assignment) if part is None]
    if missing:
        raise PartitionMapError(f"Vertex {missing[0]} has no partition ({len(missing)} unlisted)", path)
    logger.info(f"Loaded partition map {path}: {graph.num_vertices} vertices, k={k}")
    return PartitionMap(assignment=tuple(assignment), k=k)
