"""Closed-form Keiper-Li variant sequences and their asymptotic diagnostics."""

__version__ = "0.1.0"
