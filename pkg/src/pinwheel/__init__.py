"""Exact computations with graph complexes of the framed little discs."""

__version__ = "0.1.0"
