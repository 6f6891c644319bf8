"""
Domain layer package initialization.
Contains graph models, pydantic schemas, graph I/O and the metrics repository.
"""
