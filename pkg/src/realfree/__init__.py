"""Exact, asymptotic and Monte Carlo trace statistics for real Gaussian ensembles."""
__version__ = "0.1.0"
