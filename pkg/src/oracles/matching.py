"""
Brute-force matching checker.
"""

from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class MatchingCheck:
    valid: bool
    maximal: bool
    violation: Optional[str] = None


def check_matching(graph, partners: Sequence[Optional[int]]) -> MatchingCheck:
    """Validate a partner assignment; `violation` names the first problem found.

    Valid: every pair is an edge, mutual and injective. Maximal: no edge joins
    two unmatched vertices. A matching that is not valid is never reported maximal.
    """
    if len(partners) != graph.num_vertices:
        return MatchingCheck(False, False, f"{len(partners)} partners for {graph.num_vertices} vertices")
    adjacency = [set() for _ in range(graph.num_vertices)]
    for u, edges in enumerate(graph.out_edges):
        for edge in edges:
            adjacency[u].add(edge.target)
            adjacency[edge.target].add(u)

    for v, partner in enumerate(partners):
        if partner is None:
            continue
        if not 0 <= partner < graph.num_vertices:
            return MatchingCheck(False, False, f"vertex {v} matched to unknown vertex {partner}")
        if partner not in adjacency[v]:
            return MatchingCheck(False, False, f"vertex {v} matched to non-neighbour {partner}")
        if partners[partner] != v:
            return MatchingCheck(False, False, f"vertex {v} -> {partner} is not mutual")
    # Mutual pointers already make the assignment injective

    for u, edges in enumerate(graph.out_edges):
        for edge in edges:
            if edge.target != u and partners[u] is None and partners[edge.target] is None:
                return MatchingCheck(True, False, f"edge {u}-{edge.target} joins two unmatched vertices")
    return MatchingCheck(True, True)
