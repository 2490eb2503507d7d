"""
Tests for parsers package
"""
