"""Vertex-centric BSP engine: messages, vertex program contract, partition workers and the master loop."""
