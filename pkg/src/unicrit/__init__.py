"""Exact arithmetic for unicritical polynomial parameter families."""

__version__ = "0.1.0"
