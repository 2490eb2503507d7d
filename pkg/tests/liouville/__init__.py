"""
Tests for liouville package
"""
