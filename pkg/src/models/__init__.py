"""
Core Chua system and describing-function models for HyperChua
"""
