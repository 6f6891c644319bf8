"""Vertex programs: shortest paths, PageRank and bipartite matching."""
