"""Exact computations with support varieties over finite-dimensional quiver algebras."""

__version__ = "0.1.0"
