"""Verification laboratory for random permutation representations of surface groups."""

__version__ = "0.1.0"
