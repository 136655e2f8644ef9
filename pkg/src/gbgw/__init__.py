"""Exact computation of generalized Brezin-Gross-Witten correlators."""
__version__ = "0.1.0"
