"""Koszul cohomology of tangent developables, ribbons and curve section rings."""

__version__ = "0.1.0"
