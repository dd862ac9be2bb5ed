"""Finite-frame workbench for belief update and belief revision logics."""

__version__ = "0.1.0"
