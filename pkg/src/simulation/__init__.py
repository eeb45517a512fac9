"""
Numerical integration and Poincare sectioning for HyperChua
"""
