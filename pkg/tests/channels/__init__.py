"""
Tests for channels package
"""
