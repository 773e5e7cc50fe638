"""Quantum Functions for two interacting banks coupled to fermionic environments."""

__version__ = "0.1.0"
