"""
HyperChua Modeling System
Describing-function analysis, simulation and bifurcation mapping of the Chua
circuit with an exponential-hyperbolic (sinh) nonlinearity
"""

__version__ = "1.0.0"
__description__ = "Hyperbolic Chua circuit analysis and simulation toolkit"
