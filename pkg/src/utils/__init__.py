"""
Utility functions for HyperChua
"""
