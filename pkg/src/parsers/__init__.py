"""
Parsers package for channel and graph spec strings
"""
