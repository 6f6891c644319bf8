"""
Configuration package: logging setup and engine/bench defaults.
"""
