"""Exact certification of Chebyshev properties for families of Abelian integrals."""

__version__ = "0.1.0"
