"""Polynomial partitioning of planar semi-algebraic families and the query structures built on it."""

__version__ = "0.1.0"
