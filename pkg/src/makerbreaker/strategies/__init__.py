"""Maker and Breaker strategies, plus the registry that builds them by id."""

from .registry import make_strategy, roster

__all__ = ["make_strategy", "roster"]
