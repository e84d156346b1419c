"""
Test suite for RANK FLOW.

This package contains unit tests and property-based tests for all modules.
"""
