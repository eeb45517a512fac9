"""
Configuration for HyperChua
"""
