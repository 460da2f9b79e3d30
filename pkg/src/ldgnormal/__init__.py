"""Exact normal-form reduction of SO(3)-invariant Landau-deGennes potentials."""

__version__ = "0.1.0"
