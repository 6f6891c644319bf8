"""
Shortest-path references.
dijkstra is the ground truth for SSSP runs; bellman_ford is an independent
second opinion built on networkx.
"""

import heapq
import math
from typing import List, Sequence

import networkx as nx

from src.domain.errors import ConfigurationError

INF = math.inf


def _check(graph, source: int) -> None:
    if not 0 <= source < graph.num_vertices:
        raise ConfigurationError(f"Source vertex {source} outside [0, {graph.num_vertices})")
    for edges in graph.out_edges:
        for edge in edges:
            if edge.weight < 0:
                raise ConfigurationError(f"Negative edge weight {edge.weight}")


def dijkstra(graph, source: int) -> List[float]:
    """Exact distances from `source`; INF for unreachable vertices."""
    _check(graph, source)
    dist = [INF] * graph.num_vertices
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for edge in graph.out_edges[u]:
            candidate = d + edge.weight
            if candidate < dist[edge.target]:
                dist[edge.target] = candidate
                heapq.heappush(heap, (candidate, edge.target))
    return dist


def bellman_ford(graph, source: int) -> List[float]:
    _check(graph, source)
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(graph.num_vertices))
    for u, edges in enumerate(graph.out_edges):
        for edge in edges:
            # Parallel edges collapse to the lightest one
            current = digraph.get_edge_data(u, edge.target)
            if current is None or edge.weight < current["weight"]:
                digraph.add_edge(u, edge.target, weight=edge.weight)
    lengths = nx.single_source_bellman_ford_path_length(digraph, source, weight="weight")
    return [float(lengths[v]) if v in lengths else INF for v in range(graph.num_vertices)]


def distances_equal(left: Sequence[float], right: Sequence[float]) -> bool:
    return len(left) == len(right) and all(a == b for a, b in zip(left, right))
