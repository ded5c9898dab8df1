"""Numerical Chabauty limits of one-generator subgroups of PSL(2,R)."""

__version__ = "0.1.0"
