"""
Engine and benchmark defaults.
Module-level constants shared by the engine, the algorithms and the bench surfaces.
"""

# Master loop
DEFAULT_MAX_ITERATIONS = 100_000

# Local phase cap: max(PSEUDO_SUPERSTEP_FACTOR * |V_partition|, MIN_PSEUDO_SUPERSTEP_CAP)
PSEUDO_SUPERSTEP_FACTOR = 10
MIN_PSEUDO_SUPERSTEP_CAP = 1000

# PageRank
DAMPING = 0.85
RESET_PROBABILITY = 1.0 - DAMPING
DEFAULT_DELTA = 1e-4
DEFAULT_PAGERANK_BUDGET = 30

# Bench output
DEFAULT_LOG_FILE = "bsp_bench.log"
DEFAULT_METRICS_PATH = "metrics.csv"
PLOT_SUFFIX = ".plot.csv"
MANIFEST_SUFFIX = ".manifests.jsonl"
MANIFEST_HASH_LENGTH = 16

# HTTP port
DEFAULT_HOST = "0.0.0.0"
DEFAULT_PORT = 8000
