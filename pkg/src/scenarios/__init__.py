"""
Regimes, bifurcation sweeps and parameter-plane maps for HyperChua
"""
