"""Exact-arithmetic models of legal equilibrium, tax adjudication and a constitution court."""

__version__ = "0.1.0"
