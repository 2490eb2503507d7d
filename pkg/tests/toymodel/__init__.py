"""
Tests for toymodel package
"""
