"""
Power-iteration PageRank reference.
"""

from enum import Enum
from typing import List, Union

import numpy as np

from src.config.settings import DAMPING, RESET_PROBABILITY
from src.domain.errors import ConfigurationError


class RankConvention(str, Enum):
    UNNORMALIZED = "unnormalized"  # v = 0.15 + 0.85 * sum, starts from zeros
    NORMALIZED = "normalized"  # v = 0.15/N + 0.85 * sum, starts uniform


def _transition(graph) -> np.ndarray:
    """Column-stochastic over non-dangling sources; dangling columns stay zero."""
    n = graph.num_vertices
    matrix = np.zeros((n, n))
    for u, edges in enumerate(graph.out_edges):
        if not edges:
            continue
        share = 1.0 / len(edges)
        for edge in edges:
            matrix[edge.target, u] += share
    return matrix


def power_iteration(graph, convention: Union[str, RankConvention] = RankConvention.UNNORMALIZED,
                    iters: int = 10_000) -> List[float]:
    if iters < 1:
        raise ConfigurationError(f"Power iteration needs iters >= 1, got {iters}")
    convention = RankConvention(convention)
    n = graph.num_vertices
    if n == 0:
        return []
    matrix = _transition(graph)
    if convention is RankConvention.UNNORMALIZED:
        ranks = np.zeros(n)
        reset = RESET_PROBABILITY
    else:
        ranks = np.full(n, 1.0 / n)
        reset = RESET_PROBABILITY / n
    for _ in range(iters):
        ranks = reset + DAMPING * (matrix @ ranks)
    return ranks.tolist()


def max_relative_error(values, reference) -> float:
    values = np.asarray(values, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if values.size == 0:
        return 0.0
    return float(np.max(np.abs(values - reference) / np.abs(reference)))
