"""
Tests for services package
"""
