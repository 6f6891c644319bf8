"""
Port layer package initialization.
Contains the command-line surface and the HTTP adapter.
"""
