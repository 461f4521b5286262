"""Maker-Breaker games on random graph processes."""

__version__ = "0.1.0"
