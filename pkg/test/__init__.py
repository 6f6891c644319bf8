"""
Test package initialization.
Contains unit tests and integration tests.
"""
