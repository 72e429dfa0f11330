"""Numerical laboratory for continuous-variable topological order."""

__version__ = "0.1.0"
