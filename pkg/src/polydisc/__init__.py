"""Discriminant census and volume toolkit for integer polynomials."""
__version__ = "0.1.0"
