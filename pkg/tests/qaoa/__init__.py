"""
Tests for qaoa package
"""
