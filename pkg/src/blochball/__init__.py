"""Numerical companion for pseudohyperbolic geometry, Bloch semi-norms and
composition operators on the unit ball of C^n."""

__version__ = "0.1.0"
