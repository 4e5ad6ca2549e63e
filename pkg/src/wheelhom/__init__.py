"""Homomorphisms to odd wheels: solvers, reductions and instance generators."""

__version__ = "0.1.0"
