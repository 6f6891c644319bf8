# test for graph model, partitioning and vertex classification
import random

import pytest

from src.domain.errors import ConfigurationError, PartitionMapError
from src.domain.graph import (
    PartitionMap, RawGraph, VertexKind, classify_vertices, partition_blocks, partition_hash
)
from src.domain.graph_io import generate_graph
from src.domain.models import GeneratorSpec


@pytest.fixture
def chain():
    return RawGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], original_ids=[10, 20, 30])


def test_from_edges_rejects_out_of_range_endpoint():
    with pytest.raises(ConfigurationError):
        RawGraph.from_edges(2, [(0, 2, 1.0)])


def test_from_edges_rejects_negative_weight():
    with pytest.raises(ConfigurationError):
        RawGraph.from_edges(2, [(0, 1, -1.0)])


def test_duplicate_edges_and_self_loops_are_kept():
    graph = RawGraph.from_edges(2, [(0, 1, 1.0), (0, 1, 2.0), (1, 1, 1.0)])
    assert graph.num_edges == 3
    assert graph.in_degrees() == [0, 3]


def test_dense_id_maps_input_ids(chain):
    assert chain.dense_id(20) == 1
    with pytest.raises(ConfigurationError):
        chain.dense_id(99)


def test_partition_hash_is_id_mod_k(chain):
    assert partition_hash(chain, 2).assignment == (0, 1, 0)


def test_partition_blocks_uses_contiguous_ranges(chain):
    assert partition_blocks(chain, 2).assignment == (0, 0, 1)
    # more partitions than vertices leaves trailing partitions empty
    assert partition_blocks(chain, 5).assignment == (0, 1, 2)


def test_partition_map_rejects_out_of_range_partition():
    with pytest.raises(PartitionMapError):
        PartitionMap(assignment=(0, 2), k=2)
    with pytest.raises(ConfigurationError):
        partition_hash(RawGraph.from_edges(1, []), 0)


def test_classify_marks_targets_of_cut_edges_boundary(chain):
    graph = classify_vertices(chain, partition_blocks(chain, 2))
    assert graph.kinds == (VertexKind.LOCAL, VertexKind.LOCAL, VertexKind.BOUNDARY)
    assert graph.out_edges[1][0].remote
    assert not graph.out_edges[0][0].remote
    assert graph.boundary_vertices(1) == (2,)
    assert graph.local_vertices(0) == (0, 1)
    stats = graph.stats()
    assert (stats.boundary_vertices, stats.cut_edges, stats.partition_sizes) == (1, 1, (2, 1))


def test_classify_with_one_partition_has_no_boundary(chain):
    graph = classify_vertices(chain, partition_hash(chain, 1))
    assert all(kind is VertexKind.LOCAL for kind in graph.kinds)
    assert graph.partition_vertices == ((0, 1, 2),)


def test_source_of_cut_edge_stays_local_without_remote_in_edges(chain):
    graph = classify_vertices(chain, partition_hash(chain, 2))
    # 0 has no in-edges; 1 and 2 receive over cut edges
    assert graph.kinds == (VertexKind.LOCAL, VertexKind.BOUNDARY, VertexKind.BOUNDARY)
    assert graph.in_degree == (0, 1, 1)


def test_classify_rejects_map_of_wrong_size(chain):
    with pytest.raises(PartitionMapError):
        classify_vertices(chain, PartitionMap(assignment=(0, 0), k=1))


@pytest.mark.parametrize("seed", range(20))
def test_classification_matches_brute_force_on_random_graphs(seed):
    rng = random.Random(seed)
    n = 10 + (seed * 97) % 991
    k = rng.choice([1, 2, 3, 5, 8])
    raw = generate_graph(GeneratorSpec(kind="random", n=n, p=3.0 / n, seed=seed))
    partition_map = PartitionMap(assignment=tuple(rng.randrange(k) for _ in range(n)), k=k)
    graph = classify_vertices(raw, partition_map)
    part = partition_map.assignment
    edges = [(source, edge.target) for source, edge in raw.edges()]
    for vertex in range(n):
        local = all(part[source] == part[vertex] for source, target in edges if target == vertex)
        assert graph.kinds[vertex] is (VertexKind.LOCAL if local else VertexKind.BOUNDARY), vertex
    for source, flagged in enumerate(graph.out_edges):
        assert all(edge.remote == (part[source] != part[edge.target]) for edge in flagged)
    for p in range(k):
        assert set(graph.boundary_vertices(p)) | set(graph.local_vertices(p)) == \
            {v for v in range(n) if part[v] == p}
