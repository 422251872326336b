"""
Command implementations and output writers.
"""
