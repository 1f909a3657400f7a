"""Exact Euler calculus, Behrend-type invariants and bivariant checks on finite cell models."""

__version__ = "0.1.0"
