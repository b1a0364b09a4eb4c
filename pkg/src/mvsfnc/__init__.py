"""Minimal value set binomials and Frobenius nonclassical separated-variables curves."""

__version__ = "0.1.0"
