"""
Service layer package initialization.
"""
