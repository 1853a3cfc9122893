"""Euclidean ideal classes in abelian cubic fields: arithmetic, certificates and sieves."""

__version__ = "0.1.0"
