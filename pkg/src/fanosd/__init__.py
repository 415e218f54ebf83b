"""Exact invariants, tangent spaces and finite-field checks for Fano schemes of bounded-rank matrices."""

__version__ = "0.1.0"
