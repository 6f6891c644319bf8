"""
Metrics file schemas.
Column orders of the metrics CSV and of the plot-data companion file.
"""

# One row per run, append-only
CSV_COLUMNS = [
    "manifest_hash",
    "algo",
    "engine",
    "k",
    "seed",
    "iterations",
    "remote_messages",
    "pseudo_supersteps",
    "time_s",
    "converged",
    "values_checksum",
]

# Iterations / messages against k, one row per (algo, engine, k, delta)
PLOT_COLUMNS = [
    "algo",
    "engine",
    "k",
    "delta",
    "iterations",
    "remote_messages",
    "pseudo_supersteps",
]
