"""Generalized derivatives, second primitives and coefficient recovery for trigonometric series."""

__version__ = "0.1.0"
