"""Exact computations with subdirect and fibre products of free groups."""

__version__ = "0.1.0"
