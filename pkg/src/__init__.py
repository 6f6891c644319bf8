"""
Vertex-centric BSP graph engine and benchmark.
"""
