"""Bearings-only target motion analysis: cost functions, brute-force
estimation and coordinate-transformation bias analysis."""

__version__ = "0.1.0"
