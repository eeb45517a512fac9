"""
Lyapunov spectra and attractor classification for HyperChua
"""
