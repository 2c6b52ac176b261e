"""Exact and certified-numeric toolkit for lemniscates of rational functions."""

__version__ = "0.1.0"
