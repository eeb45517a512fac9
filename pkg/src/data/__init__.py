"""
Circuit-parameter mapping and run configuration for HyperChua
"""
