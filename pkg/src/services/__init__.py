"""
Services package for experiment configuration, execution and output
"""
